#pragma once

#include "mdanm/model.hpp"
#include "mdanm/types.hpp"

#include <utility>
#include <vector>

namespace mdanm {

/// Distance on the unit circle: min(|a-b|, 1-|a-b|).
double wrap_distance(double a, double b);

/// Evaluated pseudospectrum on a per-dimension uniform grid over (0,1]^d.
/// Grid point (i_1,..,i_d) maps to f_p = (i_p + 1) / res[p]; values are
/// flattened with the last dimension fastest.
struct SpectrumGrid {
  std::vector<int> res;
  std::vector<double> values;

  long index(const std::vector<int>& i) const {
    long idx = 0;
    for (size_t p = 0; p < res.size(); ++p) idx = idx * res[p] + i[p];
    return idx;
  }
};

struct ExtractOptions {
  int grid_factor = 8;        // per-dimension resolution = grid_factor * N_p
  std::vector<int> grid_res;  // explicit per-dimension override
  int refine_iters = 3;       // coordinate-search sweeps per peak
};

/// MUSIC pseudospectrum 1 / ||E_n^H a(f)||^2 of a covariance estimate, where
/// E_n spans the eigenvectors of the M - r smallest eigenvalues.
SpectrumGrid music_spectrum(const CMat& cov, const DimSpec& dims, int r,
                            const std::vector<int>& res);

/// Locate the r largest strict local maxima of the pseudospectrum on the
/// wrapped grid and refine each with per-coordinate golden-section search.
/// If fewer than r local maxima exist the result is padded with the largest
/// remaining grid values and *found_all (when given) is set to false.
FrequencySet music_extract(const CMat& cov, const DimSpec& dims, int r,
                           const ExtractOptions& opt = {},
                           bool* found_all = nullptr);

/// Min-cost pairing of estimates to ground truth under summed squared
/// per-coordinate wraparound distance.
struct MatchReport {
  std::vector<std::pair<int, int>> pairs;  // (estimate index, truth index)
  RMat errors;                             // |pairs| x d wraparound distances
  double mse = 0.0;  // mean of squared errors over pairs and coordinates
};

MatchReport match_frequencies(const FrequencySet& est,
                              const FrequencySet& truth);

}  // namespace mdanm
