#pragma once

#include "mdanm/config.hpp"
#include "mdanm/eadf.hpp"
#include "mdanm/extract.hpp"
#include "mdanm/solver.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mdanm {

enum class ScenarioKind { lse, doa };
enum class AmplitudeMode { unit, gaussian };

/// Everything a seeded simulation run needs; parsed from a config file with
/// command-line overrides.
struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::lse;

  std::vector<int> dims{3, 3, 3};
  int sources = 3;
  int snapshots = 20;
  AmplitudeMode amplitudes = AmplitudeMode::unit;
  double gamma = 1.0;       // compression rate m = floor(gamma * M)
  bool identity = true;     // gamma = 1 uses Phi = I instead of a random draw
  std::vector<double> sigma2{1e-3};
  int trials = 20;
  std::uint64_t seed = 1;

  double tau = -1.0;  // < 0: rule tau = sigma^0.8 (floored at 1e-8)
  double rho = 0.05;
  int max_iters = 300;
  double primal_tol = 1e-6;
  InitMode init = InitMode::gaussian;

  int grid_factor = 8;
  int refine_iters = 3;

  // DOA scenario settings.
  int rings = 3;
  int per_ring = 12;
  double ring_dz = 0.375;
  double ring_diameter = 0.75;
  int L1 = 15;
  int L2 = 15;
  double elevation_min = 0.2 * pi;
  double elevation_max = 0.8 * pi;
  std::string manifold_file;  // optional measured manifold import

  std::string out_path;
  int workers = 1;

  static ScenarioConfig from_config(const Config& cfg);
  double effective_tau(double sigma2_value) const;
};

/// Rejection-sample r frequencies in (0,1]^d whose pairwise per-dimension
/// wraparound separation reaches min(1.5 / N_p, 0.75 / r).
FrequencySet draw_separated_frequencies(const DimSpec& dims, int r, Rng& rng);

CMat draw_amplitudes(AmplitudeMode mode, int r, int K, Rng& rng);

struct LseTrialOutcome {
  double mse = 0.0;
  double crb_value = 0.0;
  bool crb_valid = false;
  bool converged = false;
};

/// One seeded trial of the frequency-estimation scenario; reproducible in
/// isolation from (config seed, level, trial).
LseTrialOutcome run_lse_trial(const ScenarioConfig& cfg, double sigma2,
                              int level, int trial);

/// All trials of one noise level, dispatched over the worker pool.
std::vector<LseTrialOutcome> run_lse_level(const ScenarioConfig& cfg,
                                           double sigma2, int level);

struct ResultRow {
  double snr = 0.0;  // raw noise variance
  double admm_mean = 0.0;
  double admm_median = 0.0;
  double crb_mean = 0.0;
  double crb_median = 0.0;
  int trials_used = 0;
};

ResultRow aggregate(double sigma2, const std::vector<LseTrialOutcome>& trials);

/// CSV with header "snr,admm_mean,admm_median,crb_mean,crb_median,trials_used"
/// and one row per noise level in ascending order.
void run_lse(const ScenarioConfig& cfg, std::ostream& out);

/// CSV with header "snr,crb_mean,crb_median,trials_used" (bound only).
void run_crb(const ScenarioConfig& cfg, std::ostream& out);

struct DoaSourceRow {
  double t1 = 0.0, t2 = 0.0;  // true azimuth, elevation
  double e1 = 0.0, e2 = 0.0;  // estimated azimuth, elevation
};

std::vector<DoaSourceRow> run_doa_trial(const ScenarioConfig& cfg, int trial);

/// CSV with header "t1,t2,e1,e2", one row per source and trial.
void run_doa(const ScenarioConfig& cfg, std::ostream& out);

/// Solve a problem read from matrix files and print one frequency point per
/// line; optionally dump the covariance estimate.
void solve_file(const std::string& y_path, const std::string& phi_path,
                const std::vector<int>& dims, int r, double tau, double rho,
                int max_iters, double primal_tol, std::uint64_t seed,
                int grid_factor, const std::string& cov_out, std::ostream& out);

void parallel_for(int count, int workers, const std::function<void(int)>& fn);

}  // namespace mdanm
