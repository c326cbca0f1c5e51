#include "mdanm/solver.hpp"

#include <cmath>

namespace mdanm {

void Problem::validate() const {
  const long M = dims.total();
  if (Phi.cols() != M) throw std::invalid_argument("Problem: Phi cols != M");
  if (Phi.rows() != Y.rows())
    throw std::invalid_argument("Problem: Phi rows != Y rows");
  if (Y.cols() < 1) throw std::invalid_argument("Problem: need K >= 1");
  if (!(tau > 0.0) || !(rho > 0.0))
    throw std::invalid_argument("Problem: tau and rho must be positive");
}

namespace {

CMat hermitized(const CMat& A) { return 0.5 * (A + A.adjoint()); }

CMat gaussian_matrix(long rows, long cols, Rng& rng) {
  CMat A(rows, cols);
  for (long j = 0; j < cols; ++j)
    for (long i = 0; i < rows; ++i) A(i, j) = rng.cgaussian();
  return A;
}

}  // namespace

AdmmState init_state(const Problem& pb, std::uint64_t seed, InitMode mode) {
  pb.validate();
  const long M = pb.dims.total();
  const int K = pb.snapshots();
  AdmmState s;
  s.M = M;
  s.K = K;
  s.u = ToeplitzParams::zero(pb.dims);
  if (mode == InitMode::zeros) {
    s.W = CMat::Zero(K, K);
    s.Z = CMat::Zero(M, K);
    s.V = CMat::Zero(M + K, M + K);
    s.Lambda = CMat::Zero(M + K, M + K);
    return s;
  }
  // Draw order is part of the determinism contract: W, u, Z, V, Lambda.
  Rng rng(seed);
  s.W = hermitized(gaussian_matrix(K, K, rng));
  s.u.center = rng.gaussian();
  for (auto& c : s.u.coeffs) c = rng.cgaussian();
  s.Z = gaussian_matrix(M, K, rng);
  s.V = hermitized(gaussian_matrix(M + K, M + K, rng));
  s.Lambda = hermitized(gaussian_matrix(M + K, M + K, rng));
  return s;
}

CMat assemble_T(const AdmmState& s) {
  const long M = s.M;
  const int K = s.K;
  CMat T(M + K, M + K);
  T.topLeftCorner(M, M) = build_toeplitz(s.u);
  T.topRightCorner(M, K) = s.Z;
  T.bottomLeftCorner(K, M) = s.Z.adjoint();
  T.bottomRightCorner(K, K) = s.W;
  return T;
}

double lagrangian(const AdmmState& s, const Problem& pb) {
  const CMat T = assemble_T(s);
  const CMat R = s.V - T;
  const double coupling = s.Lambda.conjugate().cwiseProduct(R).sum().real();
  const double data = 0.5 * (pb.Phi * s.Z - pb.Y).squaredNorm();
  const double trace_term =
      0.5 * pb.tau * (s.W.trace().real() + s.M * s.u.center);
  const double penalty = 0.5 * pb.rho * R.squaredNorm();
  return coupling + data + trace_term + penalty;
}

CMat grad_W(const AdmmState& s, const Problem& pb) {
  const CMat I = CMat::Identity(s.K, s.K);
  return -0.5 * s.L0() + 0.25 * pb.tau * I + 0.5 * pb.rho * (s.W - s.V0());
}

ToeplitzParams grad_u(const AdmmState& s, const Problem& pb) {
  const long M = s.M;
  const CMat B = s.Lhat() + pb.rho * s.Vhat();
  const ToeplitzParams dB = diag_sums(B, pb.dims);
  const OccurrenceCounts f = occurrence_counts(pb.dims);
  ToeplitzParams g = ToeplitzParams::zero(pb.dims);
  g.center = -dB.center + 0.5 * pb.tau * M + pb.rho * M * s.u.center;
  for (size_t i = 0; i < g.coeffs.size(); ++i)
    g.coeffs[i] = -std::conj(dB.coeffs[i]) +
                  pb.rho * static_cast<double>(f.coeffs[i]) * s.u.coeffs[i];
  return g;
}

CMat grad_Z(const AdmmState& s, const Problem& pb) {
  return 0.5 * (pb.Phi.adjoint() * (pb.Phi * s.Z - pb.Y)) - s.L1() -
         pb.rho * (s.V1() - s.Z);
}

CMat update_W(const AdmmState& s, const Problem& pb) {
  const CMat I = CMat::Identity(s.K, s.K);
  return s.V0() + s.L0() / pb.rho - (0.5 * pb.tau / pb.rho) * I;
}

ToeplitzParams update_u(const AdmmState& s, const Problem& pb) {
  const long M = s.M;
  const CMat B = s.Lhat() / pb.rho + s.Vhat();
  const ToeplitzParams dB = diag_sums(B, pb.dims);
  const OccurrenceCounts f = occurrence_counts(pb.dims);
  ToeplitzParams u = ToeplitzParams::zero(pb.dims);
  u.center = (dB.center - 0.5 * pb.tau * M / pb.rho) / static_cast<double>(M);
  // The diagonal sums collect the lower diagonals, which carry the
  // conjugated coefficients; undo that and average per occurrence.
  for (size_t i = 0; i < u.coeffs.size(); ++i)
    u.coeffs[i] = std::conj(dB.coeffs[i]) / static_cast<double>(f.coeffs[i]);
  return u;
}

ZStepSystem::ZStepSystem(const Problem& pb)
    : llt_((pb.Phi.adjoint() * pb.Phi +
            2.0 * pb.rho * CMat::Identity(pb.dims.total(), pb.dims.total()))
               .eval()),
      PhiHY_(pb.Phi.adjoint() * pb.Y) {
  if (llt_.info() != Eigen::Success)
    throw std::runtime_error("ZStepSystem: factorization failed");
}

CMat ZStepSystem::solve_for(const AdmmState& s, const Problem& pb) const {
  return llt_.solve(PhiHY_ + 2.0 * s.L1() + 2.0 * pb.rho * s.V1());
}

CMat update_Z(const AdmmState& s, const Problem& pb) {
  return ZStepSystem(pb).solve_for(s, pb);
}

CMat project_psd(const CMat& H) {
  Eigen::SelfAdjointEigenSolver<CMat> eig(H);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("project_psd: eigendecomposition failed");
  const RVec& lam = eig.eigenvalues();
  if (lam.size() == 0 || lam(0) >= 0.0) return H;
  RVec clipped = lam.cwiseMax(0.0);
  CMat P = eig.eigenvectors() * clipped.asDiagonal() *
           eig.eigenvectors().adjoint();
  return 0.5 * (P + P.adjoint());
}

CMat update_V(const CMat& T, const CMat& Lambda, double rho) {
  return project_psd(T - Lambda / rho);
}

CMat update_V(const AdmmState& s, const Problem& pb) {
  return update_V(assemble_T(s), s.Lambda, pb.rho);
}

CMat update_dual(const CMat& Lambda, const CMat& V, const CMat& T,
                 double rho) {
  return Lambda + rho * (V - T);
}

CMat update_dual(const AdmmState& s, const Problem& pb) {
  return update_dual(s.Lambda, s.V, assemble_T(s), pb.rho);
}

SolveResult solve(const Problem& pb, const SolveConfig& cfg) {
  pb.validate();
  SolveResult res;
  res.state = init_state(pb, cfg.seed, cfg.init);
  AdmmState& s = res.state;
  const ZStepSystem zsys(pb);
  res.objective.reserve(cfg.max_iters > 0 ? cfg.max_iters : 0);
  res.primal_residual.reserve(cfg.max_iters > 0 ? cfg.max_iters : 0);
  CMat V_prev = s.V;
  for (int it = 0; it < cfg.max_iters; ++it) {
    s.u = update_u(s, pb);
    s.W = update_W(s, pb);
    s.Z = zsys.solve_for(s, pb);
    const CMat T = assemble_T(s);
    s.V = update_V(T, s.Lambda, pb.rho);
    s.Lambda = update_dual(s.Lambda, s.V, T, pb.rho);
    s.iteration = it + 1;
    const double resid = (s.V - T).norm();
    res.primal_residual.push_back(resid);
    res.objective.push_back(lagrangian(s, pb));
    // The primal residual alone can touch zero on the transient manifold
    // where V = T while T itself still drifts, so the stop also requires
    // the dual residual rho ||V^k - V^{k-1}|| to settle.
    const double dual = pb.rho * (s.V - V_prev).norm();
    if (cfg.primal_tol > 0.0 &&
        resid / std::max(1.0, T.norm()) <= cfg.primal_tol &&
        dual / std::max(1.0, s.V.norm()) <= cfg.primal_tol) {
      res.converged = true;
      break;
    }
    V_prev = s.V;
  }
  res.covariance = build_toeplitz(s.u);
  return res;
}

}  // namespace mdanm
