#include "mdanm/experiment.hpp"

#include "mdanm/crb.hpp"
#include "mdanm/matio.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

namespace mdanm {

ScenarioConfig ScenarioConfig::from_config(const Config& cfg) {
  ScenarioConfig sc;
  const std::string kind = cfg.get_str("scenario.kind", "lse");
  if (kind == "lse")
    sc.kind = ScenarioKind::lse;
  else if (kind == "doa")
    sc.kind = ScenarioKind::doa;
  else
    throw ConfigError("scenario.kind: expected 'lse' or 'doa'");

  sc.dims = cfg.get_ints("scenario.dims", sc.dims);
  sc.sources = cfg.get_int("scenario.sources", sc.sources);
  sc.snapshots = cfg.get_int("scenario.snapshots", sc.snapshots);
  const std::string amp = cfg.get_str("scenario.amplitudes", "unit");
  if (amp == "unit")
    sc.amplitudes = AmplitudeMode::unit;
  else if (amp == "gaussian")
    sc.amplitudes = AmplitudeMode::gaussian;
  else
    throw ConfigError("scenario.amplitudes: expected 'unit' or 'gaussian'");
  sc.gamma = cfg.get_double("scenario.gamma", sc.gamma);
  sc.identity = cfg.get_bool("scenario.identity", sc.identity);
  sc.sigma2 = cfg.get_doubles("scenario.sigma2", sc.sigma2);
  sc.trials = cfg.get_int("scenario.trials", sc.trials);
  sc.seed = cfg.get_u64("scenario.seed", sc.seed);

  const std::string tau = cfg.get_str("solver.tau", "auto");
  sc.tau = (tau == "auto") ? -1.0 : cfg.get_double("solver.tau", -1.0);
  sc.rho = cfg.get_double("solver.rho", sc.rho);
  sc.max_iters = cfg.get_int("solver.max_iters", sc.max_iters);
  sc.primal_tol = cfg.get_double("solver.primal_tol", sc.primal_tol);
  const std::string init = cfg.get_str("solver.init", "gaussian");
  if (init == "gaussian")
    sc.init = InitMode::gaussian;
  else if (init == "zeros")
    sc.init = InitMode::zeros;
  else
    throw ConfigError("solver.init: expected 'gaussian' or 'zeros'");

  sc.grid_factor = cfg.get_int("extract.grid_factor", sc.grid_factor);
  sc.refine_iters = cfg.get_int("extract.refine_iters", sc.refine_iters);

  sc.rings = cfg.get_int("doa.rings", sc.rings);
  sc.per_ring = cfg.get_int("doa.per_ring", sc.per_ring);
  sc.ring_dz = cfg.get_double("doa.dz", sc.ring_dz);
  sc.ring_diameter = cfg.get_double("doa.diameter", sc.ring_diameter);
  sc.L1 = cfg.get_int("doa.l1", sc.L1);
  sc.L2 = cfg.get_int("doa.l2", sc.L2);
  sc.elevation_min = cfg.get_double("doa.elevation_min", sc.elevation_min);
  sc.elevation_max = cfg.get_double("doa.elevation_max", sc.elevation_max);
  sc.manifold_file = cfg.get_str("doa.manifold", sc.manifold_file);

  sc.out_path = cfg.get_str("output.path", sc.out_path);
  sc.workers = cfg.get_int("output.workers", sc.workers);

  if (sc.trials < 1) throw ConfigError("scenario.trials must be >= 1");
  if (!(sc.gamma > 0.0 && sc.gamma <= 1.0))
    throw ConfigError("scenario.gamma must lie in (0, 1]");
  for (double s2 : sc.sigma2)
    if (s2 < 0.0) throw ConfigError("scenario.sigma2 values must be >= 0");
  if (sc.sources < 1) throw ConfigError("scenario.sources must be >= 1");
  if (sc.snapshots < 1) throw ConfigError("scenario.snapshots must be >= 1");
  if (sc.workers < 1) throw ConfigError("output.workers must be >= 1");
  return sc;
}

double ScenarioConfig::effective_tau(double sigma2_value) const {
  if (tau > 0.0) return tau;
  return std::max(std::pow(std::sqrt(sigma2_value), 0.8), 1e-8);
}

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

FrequencySet draw_separated_frequencies(const DimSpec& dims, int r, Rng& rng) {
  const int d = dims.d();
  FrequencySet F{dims, RMat(r, d)};
  if (r == 0) return F;
  std::vector<double> sep(d, 0.0);
  if (r >= 2)
    for (int p = 0; p < d; ++p)
      sep[p] = std::min(1.5 / dims.size(p), 0.75 / r);
  for (long attempt = 0; attempt < 2'000'000; ++attempt) {
    for (int i = 0; i < r; ++i)
      for (int p = 0; p < d; ++p) F.freqs(i, p) = rng.uniform_pos();
    bool ok = true;
    for (int i = 0; i < r && ok; ++i)
      for (int j = i + 1; j < r && ok; ++j)
        for (int p = 0; p < d && ok; ++p)
          ok = wrap_distance(F.freqs(i, p), F.freqs(j, p)) >= sep[p];
    if (ok) return F;
  }
  throw std::runtime_error(
      "draw_separated_frequencies: rejection sampling did not terminate");
}

CMat draw_amplitudes(AmplitudeMode mode, int r, int K, Rng& rng) {
  CMat S(r, K);
  for (int j = 0; j < K; ++j)
    for (int i = 0; i < r; ++i) {
      if (mode == AmplitudeMode::unit) {
        const double ph = 2.0 * pi * rng.uniform();
        S(i, j) = cplx(std::cos(ph), std::sin(ph));
      } else {
        S(i, j) = rng.cgaussian() / std::sqrt(2.0);
      }
    }
  return S;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

Compressor make_compressor(const ScenarioConfig& cfg, const DimSpec& dims,
                           int level, int trial) {
  const long M = dims.total();
  if (cfg.gamma >= 1.0 && cfg.identity) return Compressor::identity(dims);
  const int m = std::max<int>(1, static_cast<int>(cfg.gamma * M));
  Rng rng(substream(cfg.seed, stream::compressor, level, trial));
  return gaussian_compressor(m, dims, rng);
}

}  // namespace

LseTrialOutcome run_lse_trial(const ScenarioConfig& cfg, double sigma2,
                              int level, int trial) {
  const DimSpec dims(cfg.dims);
  Rng freq_rng(substream(cfg.seed, stream::frequencies, level, trial));
  Rng amp_rng(substream(cfg.seed, stream::amplitudes, level, trial));
  Rng noise_rng(substream(cfg.seed, stream::noise, level, trial));

  const FrequencySet F =
      draw_separated_frequencies(dims, cfg.sources, freq_rng);
  const CMat S =
      draw_amplitudes(cfg.amplitudes, cfg.sources, cfg.snapshots, amp_rng);
  const Compressor C = make_compressor(cfg, dims, level, trial);
  const CMat Z = synthesize(F, S);
  const Observation obs = observe(C, Z, sigma2, noise_rng);

  Problem pb{dims, obs.Y, C.Phi, cfg.effective_tau(sigma2), cfg.rho};
  SolveConfig scfg;
  scfg.max_iters = cfg.max_iters;
  scfg.primal_tol = cfg.primal_tol;
  scfg.seed = substream(cfg.seed, stream::init, level, trial);
  scfg.init = cfg.init;
  const SolveResult sr = solve(pb, scfg);

  ExtractOptions opt;
  opt.grid_factor = cfg.grid_factor;
  opt.refine_iters = cfg.refine_iters;
  const FrequencySet est = music_extract(sr.covariance, dims, cfg.sources, opt);
  const MatchReport rep = match_frequencies(est, F);

  const double bound = crb(lse_crb_inputs(F, C.Phi, S, sigma2));

  LseTrialOutcome out;
  out.mse = rep.mse;
  out.crb_value = bound;
  out.crb_valid = std::isfinite(bound);
  out.converged = sr.converged;
  return out;
}

std::vector<LseTrialOutcome> run_lse_level(const ScenarioConfig& cfg,
                                           double sigma2, int level) {
  std::vector<LseTrialOutcome> out(cfg.trials);
  parallel_for(cfg.trials, cfg.workers,
               [&](int t) { out[t] = run_lse_trial(cfg, sigma2, level, t); });
  return out;
}

ResultRow aggregate(double sigma2,
                    const std::vector<LseTrialOutcome>& trials) {
  std::vector<double> mses, crbs;
  for (const auto& t : trials) {
    if (!t.crb_valid) continue;  // flagged trials are left out entirely
    mses.push_back(t.mse);
    crbs.push_back(t.crb_value);
  }
  ResultRow row;
  row.snr = sigma2;
  row.admm_mean = mean(mses);
  row.admm_median = median(mses);
  row.crb_mean = mean(crbs);
  row.crb_median = median(crbs);
  row.trials_used = static_cast<int>(mses.size());
  return row;
}

namespace {

std::vector<double> sorted_sigma2(const ScenarioConfig& cfg) {
  std::vector<double> s = cfg.sigma2;
  std::sort(s.begin(), s.end());
  return s;
}

void write_row(std::ostream& out, const ResultRow& row, bool with_admm) {
  out << format_double(row.snr) << ',';
  if (with_admm)
    out << format_double(row.admm_mean) << ','
        << format_double(row.admm_median) << ',';
  out << format_double(row.crb_mean) << ',' << format_double(row.crb_median)
      << ',' << row.trials_used << '\n';
}

}  // namespace

void run_lse(const ScenarioConfig& cfg, std::ostream& out) {
  out << "snr,admm_mean,admm_median,crb_mean,crb_median,trials_used\n";
  const auto levels = sorted_sigma2(cfg);
  for (int l = 0; l < static_cast<int>(levels.size()); ++l)
    write_row(out, aggregate(levels[l], run_lse_level(cfg, levels[l], l)),
              true);
}

void run_crb(const ScenarioConfig& cfg, std::ostream& out) {
  out << "snr,crb_mean,crb_median,trials_used\n";
  const auto levels = sorted_sigma2(cfg);
  for (int l = 0; l < static_cast<int>(levels.size()); ++l) {
    const DimSpec dims(cfg.dims);
    std::vector<LseTrialOutcome> trials(cfg.trials);
    parallel_for(cfg.trials, cfg.workers, [&](int t) {
      Rng freq_rng(substream(cfg.seed, stream::frequencies, l, t));
      Rng amp_rng(substream(cfg.seed, stream::amplitudes, l, t));
      const FrequencySet F =
          draw_separated_frequencies(dims, cfg.sources, freq_rng);
      const CMat S =
          draw_amplitudes(cfg.amplitudes, cfg.sources, cfg.snapshots, amp_rng);
      const Compressor C = make_compressor(cfg, dims, l, t);
      const double bound = crb(lse_crb_inputs(F, C.Phi, S, levels[l]));
      trials[t].crb_value = bound;
      trials[t].crb_valid = std::isfinite(bound);
    });
    write_row(out, aggregate(levels[l], trials), false);
  }
}

namespace {

// Angles drawn uniformly (elevation within the configured band), rejected
// until the mapped frequencies satisfy the separation rule.
RMat draw_doa_angles(const ScenarioConfig& cfg, const DimSpec& dims,
                     Rng& rng) {
  const int r = cfg.sources;
  RMat angles(r, 2);
  std::vector<double> sep(2, 0.0);
  if (r >= 2) {
    for (int p = 0; p < 2; ++p)
      sep[p] = std::min(1.5 / dims.size(p), 0.75 / r);
    // The elevation band maps to a frequency interval of this width; the
    // requested separation must leave that interval feasible for r points.
    const double band = (cfg.elevation_max - cfg.elevation_min) / (2.0 * pi);
    sep[1] = std::min(sep[1], 0.9 * band / (r - 1));
  }
  for (long attempt = 0; attempt < 2'000'000; ++attempt) {
    for (int i = 0; i < r; ++i) {
      angles(i, 0) = 2.0 * pi * rng.uniform();
      angles(i, 1) = cfg.elevation_min +
                     (cfg.elevation_max - cfg.elevation_min) * rng.uniform();
    }
    bool ok = true;
    for (int i = 0; i < r && ok; ++i)
      for (int j = i + 1; j < r && ok; ++j)
        for (int p = 0; p < 2 && ok; ++p)
          ok = wrap_distance(angle_to_frequency(angles(i, p)),
                             angle_to_frequency(angles(j, p))) >= sep[p];
    if (ok) return angles;
  }
  throw std::runtime_error("draw_doa_angles: rejection sampling did not terminate");
}

EadfModel scenario_eadf(const ScenarioConfig& cfg) {
  if (!cfg.manifold_file.empty())
    return fit_eadf(load_manifold(cfg.manifold_file), cfg.L1, cfg.L2);
  const ArrayGeometry geom = stacked_circular_array(
      cfg.rings, cfg.per_ring, cfg.ring_dz, cfg.ring_diameter);
  return fit_eadf(geom, cfg.L1, cfg.L2);
}

}  // namespace

std::vector<DoaSourceRow> run_doa_trial(const ScenarioConfig& cfg, int trial) {
  const EadfModel model = scenario_eadf(cfg);
  const DimSpec dims({cfg.L1, cfg.L2});
  const double sigma2 = cfg.sigma2.front();

  Rng freq_rng(substream(cfg.seed, stream::frequencies, 0, trial));
  Rng amp_rng(substream(cfg.seed, stream::amplitudes, 0, trial));
  Rng noise_rng(substream(cfg.seed, stream::noise, 0, trial));

  const RMat angles = draw_doa_angles(cfg, dims, freq_rng);
  const CMat S =
      draw_amplitudes(cfg.amplitudes, cfg.sources, cfg.snapshots, amp_rng);

  CMat Psi;
  if (cfg.gamma >= 1.0 && cfg.identity) {
    Psi = CMat::Identity(model.antennas, model.antennas);
  } else {
    const int m = std::max<int>(1, static_cast<int>(cfg.gamma * model.antennas));
    Rng comp_rng(substream(cfg.seed, stream::compressor, 0, trial));
    Psi = CMat(m, model.antennas);
    for (int j = 0; j < model.antennas; ++j)
      for (int i = 0; i < m; ++i) Psi(i, j) = comp_rng.cgaussian();
    for (int j = 0; j < model.antennas; ++j) Psi.col(j).normalize();
  }

  const DoaProblem dp =
      doa_problem(model, Psi, angles, S, sigma2, cfg.effective_tau(sigma2),
                  cfg.rho, noise_rng);

  SolveConfig scfg;
  scfg.max_iters = cfg.max_iters;
  scfg.primal_tol = cfg.primal_tol;
  scfg.seed = substream(cfg.seed, stream::init, 0, trial);
  scfg.init = cfg.init;
  const SolveResult sr = solve(dp.problem, scfg);

  ExtractOptions opt;
  opt.grid_factor = cfg.grid_factor;
  opt.refine_iters = cfg.refine_iters;
  const FrequencySet est = music_extract(sr.covariance, dims, cfg.sources, opt);
  const MatchReport rep = match_frequencies(est, dp.truth);
  const std::vector<DoaAngles> est_angles = angles_from_frequencies(est);

  std::vector<int> truth_to_est(cfg.sources, -1);
  for (const auto& [e, t] : rep.pairs) truth_to_est[t] = e;

  std::vector<DoaSourceRow> rows(cfg.sources);
  for (int i = 0; i < cfg.sources; ++i) {
    rows[i].t1 = angles(i, 0);
    rows[i].t2 = angles(i, 1);
    const int e = truth_to_est[i];
    if (e >= 0) {
      rows[i].e1 = est_angles[e].azimuth;
      rows[i].e2 = est_angles[e].elevation;
    }
  }
  return rows;
}

void run_doa(const ScenarioConfig& cfg, std::ostream& out) {
  out << "t1,t2,e1,e2\n";
  std::vector<std::vector<DoaSourceRow>> all(cfg.trials);
  parallel_for(cfg.trials, cfg.workers,
               [&](int t) { all[t] = run_doa_trial(cfg, t); });
  for (const auto& rows : all)
    for (const auto& r : rows)
      out << format_double(r.t1) << ',' << format_double(r.t2) << ','
          << format_double(r.e1) << ',' << format_double(r.e2) << '\n';
}

void solve_file(const std::string& y_path, const std::string& phi_path,
                const std::vector<int>& dims_list, int r, double tau,
                double rho, int max_iters, double primal_tol,
                std::uint64_t seed, int grid_factor,
                const std::string& cov_out, std::ostream& out) {
  const DimSpec dims(dims_list);
  const CMat Y = load_matrix(y_path);
  CMat Phi;
  if (phi_path.empty())
    Phi = CMat::Identity(dims.total(), dims.total());
  else
    Phi = load_matrix(phi_path);

  Problem pb{dims, Y, Phi, tau, rho};
  SolveConfig scfg;
  scfg.max_iters = max_iters;
  scfg.primal_tol = primal_tol;
  scfg.seed = seed;
  const SolveResult sr = solve(pb, scfg);

  if (!cov_out.empty()) save_matrix(cov_out, sr.covariance);

  ExtractOptions opt;
  opt.grid_factor = grid_factor;
  const FrequencySet est = music_extract(sr.covariance, dims, r, opt);
  for (int i = 0; i < est.count(); ++i) {
    for (int p = 0; p < dims.d(); ++p) {
      if (p) out << ' ';
      out << format_double(est.freqs(i, p));
    }
    out << '\n';
  }
}

}  // namespace mdanm
