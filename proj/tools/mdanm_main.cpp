// Command-line front end: seeded Monte-Carlo sweeps, CRB evaluation and a
// direct solve entry point.  Exit codes: 0 success, 2 configuration error,
// 3 I/O error.
#include "mdanm/experiment.hpp"
#include "mdanm/matio.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> workers;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "scenario config file");
  cmd->add_option("--seed", f.seed, "master seed override");
  cmd->add_option("--trials", f.trials, "trial count override");
  cmd->add_option("--workers", f.workers, "worker pool size override");
  cmd->add_option("--out", f.out_path, "output CSV path (default: stdout)");
}

mdanm::ScenarioConfig load_scenario(const CommonFlags& f,
                                    const std::string& kind) {
  mdanm::Config cfg = f.config_path.empty()
                          ? mdanm::Config{}
                          : mdanm::Config::from_file(f.config_path);
  cfg.set("scenario.kind", kind);
  if (f.seed) cfg.set("scenario.seed", std::to_string(*f.seed));
  if (f.trials) cfg.set("scenario.trials", std::to_string(*f.trials));
  if (f.workers) cfg.set("output.workers", std::to_string(*f.workers));
  if (!f.out_path.empty()) cfg.set("output.path", f.out_path);
  return mdanm::ScenarioConfig::from_config(cfg);
}

int with_output(const std::string& path,
                const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) {
    fn(std::cout);
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mdanm::IoError(path + ": cannot open for writing");
  fn(out);
  if (!out) throw mdanm::IoError(path + ": write failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gridless multidimensional frequency and DOA estimation"};
  app.require_subcommand(1);

  CommonFlags lse_flags, doa_flags, crb_flags;
  auto* lse = app.add_subcommand("lse-sim",
                                 "Monte-Carlo frequency-estimation sweep");
  add_common(lse, lse_flags);
  auto* doa = app.add_subcommand("doa-sim", "2-D DOA estimation scenario");
  add_common(doa, doa_flags);
  auto* crb = app.add_subcommand("crb", "Cramer-Rao bound sweep only");
  add_common(crb, crb_flags);

  std::string y_path, phi_path, cov_out, solve_out;
  std::vector<int> dims;
  int r = 1, max_iters = 1000, grid_factor = 8;
  double tau = 0.05, rho = 0.05, primal_tol = 1e-6;
  std::uint64_t solve_seed = 0;
  auto* solve = app.add_subcommand("solve", "solve a problem from files");
  solve->add_option("--y", y_path, "observation matrix file")->required();
  solve->add_option("--phi", phi_path,
                    "measurement matrix file (default: identity)");
  solve->add_option("--dims", dims, "grid sizes N_1..N_d")->required();
  solve->add_option("--sources", r, "model order r")->required();
  solve->add_option("--tau", tau, "regularization weight");
  solve->add_option("--rho", rho, "penalty parameter");
  solve->add_option("--max-iters", max_iters, "iteration budget");
  solve->add_option("--primal-tol", primal_tol, "relative residual tolerance");
  solve->add_option("--seed", solve_seed, "state initialization seed");
  solve->add_option("--grid-factor", grid_factor, "spectrum grid factor");
  solve->add_option("--dump-cov", cov_out, "write covariance estimate here");
  solve->add_option("--out", solve_out, "write frequencies here");

  try {
    app.parse(argc, argv);
    if (*lse)
      return with_output(lse_flags.out_path, [&](std::ostream& out) {
        mdanm::run_lse(load_scenario(lse_flags, "lse"), out);
      });
    if (*doa)
      return with_output(doa_flags.out_path, [&](std::ostream& out) {
        mdanm::run_doa(load_scenario(doa_flags, "doa"), out);
      });
    if (*crb)
      return with_output(crb_flags.out_path, [&](std::ostream& out) {
        mdanm::run_crb(load_scenario(crb_flags, "lse"), out);
      });
    if (*solve)
      return with_output(solve_out, [&](std::ostream& out) {
        mdanm::solve_file(y_path, phi_path, dims, r, tau, rho, max_iters,
                          primal_tol, solve_seed, grid_factor, cov_out, out);
      });
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const mdanm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const mdanm::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
