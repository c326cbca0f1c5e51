#pragma once

#include "mdanm/rng.hpp"
#include "mdanm/types.hpp"

namespace mdanm {

/// r frequency points in (0,1]^d, one per row of freqs.
struct FrequencySet {
  DimSpec dims;
  RMat freqs;  // r x d

  int count() const { return static_cast<int>(freqs.rows()); }
};

/// Unit-norm complex exponential: entry at multi-index k is
/// exp(-j 2 pi <k, f>) / sqrt(M), flattened in the shared multi-index order.
CVec atom(const RVec& f, const DimSpec& dims);

/// M x r matrix whose columns are the atoms of F.
CMat steering_matrix(const FrequencySet& F);

/// Z = A(F) * S for an r x K amplitude matrix S.
CMat synthesize(const FrequencySet& F, const CMat& S);

/// Linear measurement map Phi (m x M) with compression rate m / M.
struct Compressor {
  CMat Phi;

  int measurements() const { return static_cast<int>(Phi.rows()); }
  double rate() const {
    return static_cast<double>(Phi.rows()) / static_cast<double>(Phi.cols());
  }

  static Compressor identity(const DimSpec& dims) {
    return {CMat::Identity(dims.total(), dims.total())};
  }
};

/// i.i.d. complex Gaussian entries, columns scaled to the unit sphere.
Compressor gaussian_compressor(int m, const DimSpec& dims, Rng& rng);

struct Observation {
  CMat Y;  // m x K
  double noise_var = 0.0;
};

/// Y = Phi Z + N with i.i.d. circular complex Gaussian noise of per-entry
/// variance sigma2 (real and imaginary parts carry sigma2 / 2 each).
Observation observe(const Compressor& C, const CMat& Z, double sigma2,
                    Rng& rng);

}  // namespace mdanm
