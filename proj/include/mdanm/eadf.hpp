#pragma once

#include "mdanm/model.hpp"
#include "mdanm/rng.hpp"
#include "mdanm/solver.hpp"
#include "mdanm/types.hpp"

#include <string>
#include <vector>

namespace mdanm {

/// Antenna element positions in wavelengths.
struct ArrayGeometry {
  Eigen::Matrix<double, Eigen::Dynamic, 3> positions;

  int count() const { return static_cast<int>(positions.rows()); }
};

/// Rings of elements stacked along z, centered about the x-y plane.
ArrayGeometry stacked_circular_array(int rings = 3, int per_ring = 12,
                                     double dz = 0.375,
                                     double diameter = 0.75);

/// Isotropic plane-wave response: element m gets exp(j 2 pi <p_m, kappa>)
/// with unit wave vector kappa(az, el).  Evaluating el beyond pi continues
/// the manifold along the great circle through the poles, which keeps it
/// 2 pi-periodic in both angles.
CVec ideal_response(const ArrayGeometry& geom, double az, double el);

/// Manifold sampled on a uniform periodic (az, el) grid; column a*grid_el + b
/// holds the response at (2 pi a / grid_az, 2 pi b / grid_el).
struct SampledManifold {
  CMat samples;  // antennas x (grid_az * grid_el)
  int grid_az = 0;
  int grid_el = 0;
};

SampledManifold sample_manifold(const ArrayGeometry& geom, int grid_az,
                                int grid_el);

/// Text import/export: header "antennas grid_az grid_el", then one row per
/// antenna of "re im" pairs.
SampledManifold load_manifold(const std::string& path);
void save_manifold(const std::string& path, const SampledManifold& man);

/// Truncated 2-D Fourier-series model of the array response.  Row m of
/// coeffs holds antenna m's L1 x L2 coefficient block, vectorized with the
/// second index fastest and indices ascending from -(L-1)/2 to (L-1)/2.
struct EadfModel {
  int antennas = 0;
  int L1 = 0;
  int L2 = 0;
  CMat coeffs;  // antennas x (L1 * L2)
};

/// Centered 2-D DFT of the sampled manifold, truncated to L1 x L2 terms.
/// The grid must satisfy grid_az >= 2 L1 and grid_el >= 2 L2.
EadfModel fit_eadf(const SampledManifold& man, int L1, int L2);

/// Convenience: sample the geometry on a (2 L1 + 2) x (2 L2 + 2) grid
/// (or the given one) and fit.
EadfModel fit_eadf(const ArrayGeometry& geom, int L1, int L2, int grid_az = 0,
                   int grid_el = 0);

/// Evaluate the Fourier series at (az, el):
/// r_m = 1/sqrt(L1 L2) sum_l g_{m,l} exp(j (az l_1 + el l_2)).
CVec eadf_response(const EadfModel& model, double az, double el);

/// Angle <-> frequency convention tying the Fourier basis exp(+j theta l)
/// to the atom convention exp(-j 2 pi k f):  f = (-theta / 2 pi) mod 1.
double angle_to_frequency(double theta);   // result in (0, 1]
double frequency_to_angle(double f);       // result in [0, 2 pi)

struct DoaAngles {
  double azimuth = 0.0;
  double elevation = 0.0;
  bool folded = false;  // elevation was mapped back into [0, pi]
};

/// Map estimated frequencies back to angles; elevations beyond pi are folded
/// onto the great-circle continuation (azimuth shifted by pi) and flagged.
std::vector<DoaAngles> angles_from_frequencies(const FrequencySet& F);

struct DoaProblem {
  Problem problem;     // dims = [L1, L2], Phi = Psi * G
  FrequencySet truth;  // frequencies of the true angles
};

/// Cast a DOA scenario as a 2-D frequency-estimation problem.  Snapshots are
/// synthesized from the model responses at the true angles; the unit-modulus
/// per-source phase produced by the centered-index convention is absorbed
/// into the amplitudes and does not enter Phi.
DoaProblem doa_problem(const EadfModel& model, const CMat& Psi,
                       const RMat& angles, const CMat& S, double sigma2,
                       double tau, double rho, Rng& noise_rng);

}  // namespace mdanm
