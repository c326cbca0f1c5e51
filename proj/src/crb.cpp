#include "mdanm/crb.hpp"

#include <cmath>
#include <limits>

namespace mdanm {

CVec atom_derivative(const RVec& f, const DimSpec& dims, int axis) {
  if (axis < 0 || axis >= dims.d())
    throw std::invalid_argument("atom_derivative: axis out of range");
  CVec a = atom(f, dims);
  const long M = dims.total();
  std::vector<int> k(dims.d(), 1);
  for (long idx = 0; idx < M; ++idx) {
    a[idx] *= cplx(0.0, -2.0 * pi * k[axis]);
    int p = dims.d() - 1;
    while (p >= 0 && k[p] == dims.size(p)) {
      k[p] = 1;
      --p;
    }
    if (p >= 0) ++k[p];
  }
  return a;
}

double crb(const CrbInputs& in) {
  const double inf = std::numeric_limits<double>::infinity();
  const int r = static_cast<int>(in.G.cols());
  const int m = static_cast<int>(in.G.rows());
  const int d = static_cast<int>(in.D.size());
  if (r == 0 || d == 0) throw std::invalid_argument("crb: empty inputs");
  for (const auto& Di : in.D)
    if (Di.rows() != m || Di.cols() != r)
      throw std::invalid_argument("crb: derivative shape mismatch");
  if (in.Rhat.rows() != r || in.Rhat.cols() != r)
    throw std::invalid_argument("crb: Rhat shape mismatch");

  Eigen::FullPivLU<CMat> gram(in.G.adjoint() * in.G);
  if (!gram.isInvertible()) return inf;  // coincident sources
  const CMat Pi =
      CMat::Identity(m, m) - in.G * gram.solve(in.G.adjoint());

  CMat D(m, static_cast<long>(d) * r);
  for (int i = 0; i < d; ++i) D.middleCols(static_cast<long>(i) * r, r) = in.D[i];

  const CMat H = D.adjoint() * Pi * D;
  CMat Rrep(static_cast<long>(d) * r, static_cast<long>(d) * r);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      Rrep.block(static_cast<long>(i) * r, static_cast<long>(j) * r, r, r) =
          in.Rhat.transpose();

  const RMat F = H.cwiseProduct(Rrep).real();
  Eigen::FullPivLU<RMat> fim(F);
  if (!fim.isInvertible()) return inf;
  const double trace_inv =
      fim.solve(RMat::Identity(F.rows(), F.cols())).trace();
  return in.sigma2 / (2.0 * in.K) * trace_inv;
}

CrbInputs lse_crb_inputs(const FrequencySet& F, const CMat& Phi, const CMat& S,
                         double sigma2) {
  CrbInputs in;
  in.G = Phi * steering_matrix(F);
  const int d = F.dims.d();
  in.D.reserve(d);
  for (int p = 0; p < d; ++p) {
    CMat Dp(Phi.rows(), F.count());
    for (int i = 0; i < F.count(); ++i)
      Dp.col(i) = Phi * atom_derivative(F.freqs.row(i).transpose(), F.dims, p);
    in.D.push_back(std::move(Dp));
  }
  const int K = static_cast<int>(S.cols());
  in.Rhat = S * S.adjoint() / static_cast<double>(K);
  in.sigma2 = sigma2;
  in.K = K;
  return in;
}

}  // namespace mdanm
