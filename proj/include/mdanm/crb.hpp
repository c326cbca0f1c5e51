#pragma once

#include "mdanm/model.hpp"
#include "mdanm/types.hpp"

#include <vector>

namespace mdanm {

/// Analytic derivative of atom(f) with respect to the frequency coordinate
/// `axis` (0-based): entry at multi-index k is (-j 2 pi k_axis) a(f)_k.
CVec atom_derivative(const RVec& f, const DimSpec& dims, int axis);

/// Ingredients of the deterministic bound: effective steering matrix G,
/// its per-coordinate derivatives D_i, the sample covariance
/// Rhat = S S^H / K, the noise variance and the snapshot count.
struct CrbInputs {
  CMat G;               // m x r
  std::vector<CMat> D;  // d matrices, each m x r
  CMat Rhat;            // r x r
  double sigma2 = 0.0;
  int K = 1;
};

/// sigma2 / (2K) tr([Re(D^H Pi_G^perp D .* (1_{dxd} kron Rhat)^T)]^{-1});
/// returns +infinity when G^H G or the information matrix is singular.
double crb(const CrbInputs& in);

/// Assemble the inputs for the frequency-estimation scenario:
/// G = Phi A(F), D_i = Phi dA/df_i.
CrbInputs lse_crb_inputs(const FrequencySet& F, const CMat& Phi, const CMat& S,
                         double sigma2);

}  // namespace mdanm
