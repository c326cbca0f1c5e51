#include "mdanm/model.hpp"

#include <cmath>

namespace mdanm {

CVec atom(const RVec& f, const DimSpec& dims) {
  const int d = dims.d();
  if (f.size() != d) throw std::invalid_argument("atom: dimension mismatch");
  for (int p = 0; p < d; ++p)
    if (!(f[p] > 0.0 && f[p] <= 1.0))
      throw std::invalid_argument("atom: frequency outside (0,1]");
  const long M = dims.total();
  const double scale = 1.0 / std::sqrt(static_cast<double>(M));
  CVec a(M);
  std::vector<int> k(d, 1);
  for (long idx = 0; idx < M; ++idx) {
    double phase = 0.0;
    for (int p = 0; p < d; ++p) phase += k[p] * f[p];
    phase *= -2.0 * pi;
    a[idx] = scale * cplx(std::cos(phase), std::sin(phase));
    int p = d - 1;
    while (p >= 0 && k[p] == dims.size(p)) {
      k[p] = 1;
      --p;
    }
    if (p >= 0) ++k[p];
  }
  return a;
}

CMat steering_matrix(const FrequencySet& F) {
  const long M = F.dims.total();
  CMat A(M, F.count());
  for (int i = 0; i < F.count(); ++i)
    A.col(i) = atom(F.freqs.row(i).transpose(), F.dims);
  return A;
}

CMat synthesize(const FrequencySet& F, const CMat& S) {
  if (S.rows() != F.count())
    throw std::invalid_argument("synthesize: amplitude rows != source count");
  return steering_matrix(F) * S;
}

Compressor gaussian_compressor(int m, const DimSpec& dims, Rng& rng) {
  const long M = dims.total();
  if (m < 1 || m > M)
    throw std::invalid_argument("gaussian_compressor: m out of range");
  CMat Phi(m, M);
  for (long j = 0; j < M; ++j)
    for (int i = 0; i < m; ++i) Phi(i, j) = rng.cgaussian();
  for (long j = 0; j < M; ++j) Phi.col(j).normalize();
  return {std::move(Phi)};
}

Observation observe(const Compressor& C, const CMat& Z, double sigma2,
                    Rng& rng) {
  if (C.Phi.cols() != Z.rows())
    throw std::invalid_argument("observe: shape mismatch");
  if (sigma2 < 0.0) throw std::invalid_argument("observe: negative variance");
  CMat Y = C.Phi * Z;
  if (sigma2 > 0.0) {
    const double s = std::sqrt(sigma2 / 2.0);
    for (Eigen::Index j = 0; j < Y.cols(); ++j)
      for (Eigen::Index i = 0; i < Y.rows(); ++i)
        Y(i, j) += s * rng.cgaussian();
  }
  return {std::move(Y), sigma2};
}

}  // namespace mdanm
