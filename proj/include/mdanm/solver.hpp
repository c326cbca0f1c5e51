#pragma once

#include "mdanm/rng.hpp"
#include "mdanm/toeplitz.hpp"
#include "mdanm/types.hpp"

#include <cstdint>
#include <vector>

namespace mdanm {

/// One instance of the regularized atomic-norm problem.
struct Problem {
  DimSpec dims;
  CMat Y;    // m x K observations
  CMat Phi;  // m x M measurement map
  double tau = 0.0;
  double rho = 0.0;

  int snapshots() const { return static_cast<int>(Y.cols()); }
  int measurements() const { return static_cast<int>(Y.rows()); }
  void validate() const;
};

/// Iterate of the splitting scheme.  V and Lambda live on the lifted
/// (M+K) x (M+K) space and are partitioned like the block matrix
/// T = [[T(u), Z], [Z^H, W]].
struct AdmmState {
  long M = 0;
  int K = 0;
  CMat W;  // K x K
  ToeplitzParams u;
  CMat Z;       // M x K
  CMat V;       // (M+K) x (M+K), PSD after every V update
  CMat Lambda;  // (M+K) x (M+K), Hermitian
  int iteration = 0;

  auto Vhat() const { return V.topLeftCorner(M, M); }
  auto V1() const { return V.topRightCorner(M, K); }
  auto V0() const { return V.bottomRightCorner(K, K); }
  auto Lhat() const { return Lambda.topLeftCorner(M, M); }
  auto L1() const { return Lambda.topRightCorner(M, K); }
  auto L0() const { return Lambda.bottomRightCorner(K, K); }
};

enum class InitMode { gaussian, zeros };

/// Fresh state: every block filled with standard Gaussians (real and
/// imaginary parts), W, V and Lambda symmetrized, u with real center.
/// InitMode::zeros gives the all-zeros state for deterministic tests.
AdmmState init_state(const Problem& pb, std::uint64_t seed,
                     InitMode mode = InitMode::gaussian);

/// Augmented Lagrangian value
///   <Lambda, V - T> + 1/2 ||Phi Z - Y||_F^2
///   + tau/2 (tr W + tr T(u)) + rho/2 ||V - T||_F^2,
/// with the inner product and traces taken real-valued so the expression is
/// defined for arbitrary (not necessarily Hermitian) inputs.
double lagrangian(const AdmmState& s, const Problem& pb);

/// Conjugate Wirtinger gradients of the Lagrangian, entrywise
/// 1/2 (d/dRe + j d/dIm); the center component of grad_u is the plain real
/// derivative.  They vanish exactly at the corresponding block update.
CMat grad_W(const AdmmState& s, const Problem& pb);
ToeplitzParams grad_u(const AdmmState& s, const Problem& pb);
CMat grad_Z(const AdmmState& s, const Problem& pb);

/// Closed-form block minimizers with all other blocks fixed.
CMat update_W(const AdmmState& s, const Problem& pb);
ToeplitzParams update_u(const AdmmState& s, const Problem& pb);
CMat update_Z(const AdmmState& s, const Problem& pb);

/// Cached factorization of the Z-step system Phi^H Phi + 2 rho I, built once
/// per problem.
class ZStepSystem {
public:
  explicit ZStepSystem(const Problem& pb);
  CMat solve_for(const AdmmState& s, const Problem& pb) const;

private:
  Eigen::LLT<CMat> llt_;
  CMat PhiHY_;
};

/// Block assembly T = [[T(u), Z], [Z^H, W]].
CMat assemble_T(const AdmmState& s);

/// Frobenius-nearest positive semidefinite matrix: eigendecompose and
/// truncate negative eigenvalues.
CMat project_psd(const CMat& H);

CMat update_V(const CMat& T, const CMat& Lambda, double rho);
CMat update_V(const AdmmState& s, const Problem& pb);

CMat update_dual(const CMat& Lambda, const CMat& V, const CMat& T, double rho);
CMat update_dual(const AdmmState& s, const Problem& pb);

struct SolveConfig {
  int max_iters = 1000;
  double primal_tol = 1e-6;  // <= 0 disables early stopping
  std::uint64_t seed = 0;
  InitMode init = InitMode::gaussian;
};

struct SolveResult {
  AdmmState state;
  std::vector<double> objective;        // Lagrangian after each iteration
  std::vector<double> primal_residual;  // ||V - T||_F after each iteration
  CMat covariance;                      // T(u) at the final iterate
  bool converged = false;
};

/// Run the iteration u -> W -> Z -> T -> V -> Lambda until the budget is
/// exhausted or ||V - T||_F / max(1, ||T||_F) falls below primal_tol.
SolveResult solve(const Problem& pb, const SolveConfig& cfg);

}  // namespace mdanm
