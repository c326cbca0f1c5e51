#include "mdanm/extract.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace mdanm {

double wrap_distance(double a, double b) {
  double d = std::fabs(a - b);
  d = std::fmod(d, 1.0);
  return std::min(d, 1.0 - d);
}

namespace {

double wrap_unit(double f) {
  f = std::fmod(f, 1.0);
  if (f <= 0.0) f += 1.0;
  return f;  // (0, 1]
}

// ||E_n^H a(f)||^2, the squared distance of the atom to the signal subspace.
struct NoiseProjection {
  CMat EnH;  // (M - r) x M
  DimSpec dims;

  double operator()(const RVec& f) const {
    return (EnH * atom(f, dims)).squaredNorm();
  }
};

double golden_min(const std::function<double(double)>& fn, double a, double b,
                  int iters = 60) {
  constexpr double gr = 0.6180339887498949;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

SpectrumGrid music_spectrum(const CMat& cov, const DimSpec& dims, int r,
                            const std::vector<int>& res) {
  const long M = dims.total();
  if (cov.rows() != M || cov.cols() != M)
    throw std::invalid_argument("music_spectrum: covariance size mismatch");
  if (r < 0 || r >= M)
    throw std::invalid_argument("music_spectrum: need 0 <= r < M");
  Eigen::SelfAdjointEigenSolver<CMat> eig(cov);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("music_spectrum: eigendecomposition failed");
  // Eigenvalues ascend, so the leading columns span the noise subspace.
  const CMat EnH = eig.eigenvectors().leftCols(M - r).adjoint();

  SpectrumGrid grid;
  grid.res = res;
  if (static_cast<int>(res.size()) != dims.d())
    throw std::invalid_argument("music_spectrum: grid dimension mismatch");
  long total = 1;
  for (int p = 0; p < dims.d(); ++p) {
    if (res[p] < 2 * dims.size(p))
      throw std::invalid_argument("music_spectrum: grid too coarse");
    total *= res[p];
  }
  grid.values.resize(total);

  const int d = dims.d();
  std::vector<int> idx(d, 0);
  RVec f(d);
  for (long n = 0; n < total; ++n) {
    for (int p = 0; p < d; ++p)
      f[p] = static_cast<double>(idx[p] + 1) / res[p];
    const double q = (EnH * atom(f, dims)).squaredNorm();
    grid.values[n] = 1.0 / std::max(q, 1e-12);
    int p = d - 1;
    while (p >= 0 && idx[p] == res[p] - 1) {
      idx[p] = 0;
      --p;
    }
    if (p >= 0) ++idx[p];
  }
  return grid;
}

FrequencySet music_extract(const CMat& cov, const DimSpec& dims, int r,
                           const ExtractOptions& opt, bool* found_all) {
  const long M = dims.total();
  if (r >= M) throw std::invalid_argument("music_extract: need r < M");
  const int d = dims.d();

  std::vector<int> res = opt.grid_res;
  if (res.empty()) {
    res.resize(d);
    for (int p = 0; p < d; ++p)
      res[p] = std::max(2 * dims.size(p), opt.grid_factor * dims.size(p));
  }
  if (static_cast<int>(res.size()) != d)
    throw std::invalid_argument("music_extract: grid_res dimension mismatch");

  if (found_all) *found_all = true;
  FrequencySet out{dims, RMat(r, d)};
  if (r == 0) return out;

  const SpectrumGrid grid = music_spectrum(cov, dims, r, res);

  // Strict local maxima against all 3^d - 1 wrapped neighbors.
  const long total = static_cast<long>(grid.values.size());
  std::vector<long> maxima;
  std::vector<int> idx(d, 0), nb(d);
  for (long n = 0; n < total; ++n) {
    bool is_max = true;
    std::vector<int> off(d, -1);
    while (is_max) {
      bool all_zero = true;
      for (int p = 0; p < d; ++p) all_zero = all_zero && off[p] == 0;
      if (!all_zero) {
        for (int p = 0; p < d; ++p)
          nb[p] = (idx[p] + off[p] + res[p]) % res[p];
        if (grid.values[grid.index(nb)] >= grid.values[n]) is_max = false;
      }
      int p = d - 1;
      while (p >= 0 && off[p] == 1) {
        off[p] = -1;
        --p;
      }
      if (p < 0) break;
      ++off[p];
    }
    if (is_max) maxima.push_back(n);
    int p = d - 1;
    while (p >= 0 && idx[p] == res[p] - 1) {
      idx[p] = 0;
      --p;
    }
    if (p >= 0) ++idx[p];
  }

  std::sort(maxima.begin(), maxima.end(), [&](long a, long b) {
    if (grid.values[a] != grid.values[b])
      return grid.values[a] > grid.values[b];
    return a < b;  // ties broken by scan order
  });
  std::vector<long> picked(maxima.begin(),
                           maxima.begin() + std::min<long>(r, maxima.size()));

  if (static_cast<int>(picked.size()) < r) {
    if (found_all) *found_all = false;
    // Degenerate spectrum: pad with the best remaining grid points.
    std::vector<long> order(total);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](long a, long b) {
      if (grid.values[a] != grid.values[b])
        return grid.values[a] > grid.values[b];
      return a < b;
    });
    for (long n : order) {
      if (static_cast<int>(picked.size()) == r) break;
      if (std::find(picked.begin(), picked.end(), n) == picked.end())
        picked.push_back(n);
    }
  }

  Eigen::SelfAdjointEigenSolver<CMat> eig(cov);
  const NoiseProjection proj{eig.eigenvectors().leftCols(M - r).adjoint(),
                             dims};

  for (int i = 0; i < r; ++i) {
    long n = picked[i];
    RVec f(d);
    for (int p = d - 1; p >= 0; --p) {
      f[p] = static_cast<double>(n % res[p] + 1) / res[p];
      n /= res[p];
    }
    // Per-coordinate golden-section search within the grid cell.
    for (int sweep = 0; sweep < opt.refine_iters; ++sweep) {
      for (int p = 0; p < d; ++p) {
        const double h = 1.0 / res[p];
        RVec probe = f;
        auto line = [&](double x) {
          probe[p] = wrap_unit(x);
          return proj(probe);
        };
        f[p] = wrap_unit(golden_min(line, f[p] - h, f[p] + h));
      }
    }
    for (int p = 0; p < d; ++p) out.freqs(i, p) = f[p];
  }
  return out;
}

namespace {

// Exact min-cost assignment (Hungarian algorithm with potentials) of the
// rows of cost to distinct columns; requires rows <= cols.
std::vector<int> assign_min_cost(const RMat& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> match(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] != 0) match[p[j] - 1] = j - 1;
  return match;
}

}  // namespace

MatchReport match_frequencies(const FrequencySet& est,
                              const FrequencySet& truth) {
  if (est.dims.d() != truth.dims.d())
    throw std::invalid_argument("match_frequencies: dimension mismatch");
  const int d = est.dims.d();
  const int ne = est.count();
  const int nt = truth.count();
  const bool est_rows = ne <= nt;
  const int n = std::min(ne, nt);
  const int m = std::max(ne, nt);

  MatchReport rep;
  rep.errors.resize(n, d);
  if (n == 0) return rep;

  RMat cost(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const auto& a = est_rows ? est.freqs.row(i) : truth.freqs.row(i);
      const auto& b = est_rows ? truth.freqs.row(j) : est.freqs.row(j);
      double c = 0.0;
      for (int p = 0; p < d; ++p) {
        const double w = wrap_distance(a[p], b[p]);
        c += w * w;
      }
      cost(i, j) = c;
    }

  const std::vector<int> match = assign_min_cost(cost);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const int e = est_rows ? i : match[i];
    const int t = est_rows ? match[i] : i;
    rep.pairs.emplace_back(e, t);
    for (int p = 0; p < d; ++p) {
      const double w = wrap_distance(est.freqs(e, p), truth.freqs(t, p));
      rep.errors(i, p) = w;
      sum += w * w;
    }
  }
  rep.mse = sum / (static_cast<double>(n) * d);
  return rep;
}

}  // namespace mdanm
