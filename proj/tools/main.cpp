// Command-line front end: stationary solves, pairwise certificates, gamma
// bounds, exact gamma, online estimation, and the bundled benchmark curves.
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "mmest/csv.hpp"
#include "mmest/estimator.hpp"
#include "mmest/experiments.hpp"

namespace {

using namespace mmest;

struct GlobalOptions {
  std::string config;
  std::string output;
  double tol = defaults::kBisectionTol;
  double theta_step = defaults::kThetaStep;
  double cap = defaults::kGammaCap;
};

std::ostream& open_output(const GlobalOptions& opt, std::ofstream& file) {
  if (opt.output.empty()) return std::cout;
  file.open(opt.output);
  if (!file) {
    throw ValidationError("cannot open output file '" + opt.output + "'");
  }
  return file;
}

struct LoadedSet {
  ExperimentSpec spec;
  ValidatedModelSet set;
  std::vector<StationarySolution> stat;
};

LoadedSet load(const GlobalOptions& opt) {
  if (opt.config.empty()) {
    throw ValidationError("--config is required for this subcommand");
  }
  ExperimentSpec spec = load_config(opt.config);
  ValidatedModelSet set = spec.validated();
  auto stat = solve_all_stationary(set);
  return {std::move(spec), std::move(set), std::move(stat)};
}

void print_matrix(std::ostream& out, const std::string& label, const Matrix& a) {
  out << "  " << label << " =";
  if (a.rows() == 1 && a.cols() == 1) {
    out << " " << csv::format(a(0, 0)) << "\n";
    return;
  }
  out << "\n";
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    out << "    ";
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out << (c ? " " : "") << csv::format(a(r, c));
    }
    out << "\n";
  }
}

int cmd_stationary(const GlobalOptions& opt) {
  const LoadedSet loaded = load(opt);
  std::ofstream file;
  std::ostream& out = open_output(opt, file);

  if (opt.output.empty()) {
    for (int i = 0; i < loaded.set.size(); ++i) {
      const auto& s = loaded.stat[i];
      out << "model " << (i + 1) << " (converged in " << s.iterations
          << " iterations, residual " << csv::format(s.residual) << ")\n";
      print_matrix(out, "P", s.P.mat());
      print_matrix(out, "K", s.K);
      print_matrix(out, "Rtilde", s.Rtilde.mat());
    }
    return 0;
  }
  // Long-format CSV: one row per matrix entry.
  out << "model,quantity,row,col,value\n";
  for (int i = 0; i < loaded.set.size(); ++i) {
    const auto& s = loaded.stat[i];
    const std::pair<const char*, const Matrix*> quantities[] = {
        {"P", &s.P.mat()}, {"K", &s.K}, {"Rtilde", &s.Rtilde.mat()}};
    for (const auto& [name, matrix] : quantities) {
      for (Eigen::Index r = 0; r < matrix->rows(); ++r) {
        for (Eigen::Index c = 0; c < matrix->cols(); ++c) {
          out << (i + 1) << "," << name << "," << r << "," << c << ","
              << csv::format((*matrix)(r, c)) << "\n";
        }
      }
    }
  }
  return 0;
}

int cmd_certify(const GlobalOptions& opt, double gamma, int horizon,
                const std::string& terminal) {
  const LoadedSet loaded = load(opt);
  const TerminalKind kind =
      terminal == "necessary" ? TerminalKind::kNecessary : TerminalKind::kSufficient;

  std::ofstream file;
  std::ostream& out = open_output(opt, file);
  if (!opt.output.empty()) out << "i,j,verdict,fails_at\n";

  bool all_ok = true;
  for (int i = 0; i < loaded.set.size(); ++i) {
    for (int j = i; j < loaded.set.size(); ++j) {
      const PairSystem pair = build_pair(loaded.set, loaded.stat, i, j);
      const PairCertificate cert =
          certify_pair(pair, loaded.stat, gamma, kind, horizon);
      all_ok = all_ok && cert.all_definite;
      if (opt.output.empty()) {
        out << "pair (" << (i + 1) << ", " << (j + 1) << "): "
            << (cert.all_definite
                    ? "AllDefinite"
                    : "FailsAt(t = " + std::to_string(cert.fails_at) + ")")
            << "\n";
        if (cert.all_definite) print_matrix(out, "T0", cert.T0.mat());
      } else {
        out << (i + 1) << "," << (j + 1) << ","
            << (cert.all_definite ? "AllDefinite" : "FailsAt") << ","
            << (cert.all_definite ? "" : std::to_string(cert.fails_at)) << "\n";
      }
    }
  }
  if (opt.output.empty()) {
    out << (kind == TerminalKind::kSufficient
                ? (all_ok ? "sufficient condition holds: gamma is an upper bound"
                          : "sufficient condition fails at this gamma")
                : (all_ok ? "no violation: gamma* may be at or below this gamma"
                          : "necessary condition violated: gamma* exceeds this gamma"))
        << "\n";
  }
  return 0;
}

std::vector<int> horizons_or_range(const std::vector<int>& horizons,
                                   const ExperimentSpec& spec) {
  if (!horizons.empty()) return horizons;
  std::vector<int> out;
  for (int n = spec.horizon.from; n <= spec.horizon.to; ++n) out.push_back(n);
  return out;
}

int cmd_bounds(const GlobalOptions& opt, const std::vector<int>& horizons) {
  const LoadedSet loaded = load(opt);
  std::ofstream file;
  std::ostream& out = open_output(opt, file);
  out << "N,gamma_floor,gamma_lower,gamma_upper\n";
  for (int N : horizons_or_range(horizons, loaded.spec)) {
    const GammaBounds gb = compute_bounds(loaded.set, loaded.stat, N, opt.tol, opt.cap);
    out << N << "," << csv::format(gb.gamma_floor) << "," << csv::format(gb.gamma_lower)
        << "," << csv::format(gb.gamma_upper) << "\n";
  }
  return 0;
}

int cmd_exact(const GlobalOptions& opt, const std::vector<int>& horizons,
              double gamma_tol) {
  const LoadedSet loaded = load(opt);
  std::ofstream file;
  std::ostream& out = open_output(opt, file);
  out << "N,gamma_exact";
  for (int i = 0; i < loaded.set.size(); ++i) out << ",theta_" << (i + 1);
  out << "\n";
  for (int N : horizons_or_range(horizons, loaded.spec)) {
    const ExactValueResult ex =
        exact_gamma(loaded.set, loaded.stat, N, gamma_tol, opt.theta_step, opt.cap);
    out << N << "," << csv::format(ex.gamma);
    for (Eigen::Index i = 0; i < ex.argmax_theta.size(); ++i) {
      out << "," << csv::format(ex.argmax_theta(i));
    }
    out << "\n";
  }
  return 0;
}

int cmd_estimate(const GlobalOptions& opt, double gamma,
                 const std::string& measurements) {
  const LoadedSet loaded = load(opt);
  const auto rows = csv::read_numeric(measurements);
  std::vector<Vector> ys;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != loaded.set.m()) {
      throw ValidationError("measurement row has " + std::to_string(row.size()) +
                            " columns, expected " + std::to_string(loaded.set.m()));
    }
    Vector y(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) y(c) = row[c];
    ys.push_back(y);
  }

  FilterBank bank =
      new_bank(loaded.set, loaded.stat, gamma, loaded.set.x0_hats());
  std::ofstream file;
  std::ostream& out = open_output(opt, file);

  out << "t";
  for (Eigen::Index i = 0; i < loaded.set.n(); ++i) out << ",x_hat_" << (i + 1);
  out << ",value";
  for (int i = 0; i < loaded.set.size(); ++i) out << ",theta_" << (i + 1);
  for (int i = 0; i < loaded.set.size(); ++i) out << ",c_" << (i + 1);
  out << "\n";

  auto emit = [&](const FilterBank& b) {
    const EstimateReport report = b.estimate(opt.theta_step);
    out << report.t;
    for (Eigen::Index i = 0; i < report.x_hat.size(); ++i) {
      out << "," << csv::format(report.x_hat(i));
    }
    out << "," << csv::format(report.game_value);
    for (Eigen::Index i = 0; i < report.theta_star.size(); ++i) {
      out << "," << csv::format(report.theta_star(i));
    }
    for (double c : b.costs()) out << "," << csv::format(c);
    out << "\n";
  };

  emit(bank);
  for (const auto& y : ys) {
    bank = bank.step(y);
    emit(bank);
  }
  return 0;
}

int cmd_paper_experiments(const GlobalOptions& opt, const std::string& out_dir,
                          int n_from, int n_to, const std::string& systems) {
  std::cout << "stationary-P regression against the published values (tolerance 0.01):\n";
  bool all_pass = true;
  for (const auto& row : run_table1()) {
    std::cout << "  system " << row.system << " model " << row.model << ": computed "
              << csv::format(row.computed) << " published " << csv::format(row.published)
              << " -> " << (row.pass ? "pass" : "FAIL") << "\n";
    all_pass = all_pass && row.pass;
  }
  if (!all_pass) {
    throw NumericalError("stationary-P regression failed");
  }

  for (char which : systems) {
    ExperimentSpec spec = builtin_spec(which);
    spec.horizon = {n_from, n_to};
    spec.gamma_tol = opt.tol;
    spec.theta_step = opt.theta_step;
    const auto rows = run_curves(spec, opt.cap);
    const std::string path = out_dir + "/table1_" + which + "_curves.csv";
    std::ofstream out(path);
    if (!out) {
      throw ValidationError("cannot open output file '" + path + "'");
    }
    write_curves_csv(out, rows);
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Minimax performance levels and the minimax estimator for "
      "multiple-model state estimation"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions opt;
  app.add_option("--config", opt.config, "model set / experiment configuration (JSON)");
  app.add_option("--output", opt.output, "output file (default: stdout)");
  app.add_option("--tol", opt.tol, "bisection tolerance on gamma")
      ->check(CLI::PositiveNumber);
  app.add_option("--theta-step", opt.theta_step, "probability-simplex grid step")
      ->check(CLI::PositiveNumber);
  app.add_option("--cap", opt.cap, "upper cap for the gamma bracketing search")
      ->check(CLI::PositiveNumber);

  auto* stationary = app.add_subcommand(
      "stationary", "per-model stationary P, gain K and innovation weight Rtilde");

  double gamma = 0.0;
  int cert_horizon = 1;
  std::string terminal = "sufficient";
  auto* certify =
      app.add_subcommand("certify", "pairwise definiteness certificates at a gamma");
  certify->add_option("--gamma", gamma, "performance level to certify")->required();
  certify->add_option("--horizon", cert_horizon, "horizon N")->required();
  certify->add_option("--terminal", terminal, "terminal condition")
      ->check(CLI::IsMember({"sufficient", "necessary"}));

  std::vector<int> horizons;
  auto* bounds = app.add_subcommand(
      "bounds", "bisected lower/upper bounds on the optimal performance level");
  bounds->add_option("--horizon", horizons,
                     "horizon(s) N (default: the config's range)");

  double gamma_tol = defaults::kBisectionTol;
  std::vector<int> exact_horizons;
  auto* exact = app.add_subcommand(
      "exact", "exact optimal performance level over the theta grid (two models)");
  exact->add_option("--horizon", exact_horizons,
                    "horizon(s) N (default: the config's range)");
  exact->add_option("--gamma-tol", gamma_tol, "bisection tolerance on gamma")
      ->check(CLI::PositiveNumber);

  double est_gamma = 0.0;
  std::string measurements;
  auto* estimate =
      app.add_subcommand("estimate", "run the minimax estimator over measurements");
  estimate->add_option("--gamma", est_gamma, "performance level")->required();
  estimate->add_option("--measurements", measurements, "CSV of measurements, one row per t")
      ->required();

  std::string out_dir = ".";
  int n_from = 1;
  int n_to = 20;
  std::string systems = "abcd";
  auto* paper = app.add_subcommand(
      "paper-experiments",
      "stationary-P regression and bound/exact curves for the bundled benchmarks");
  paper->add_option("--output-dir", out_dir, "directory for the curve CSV files");
  paper->add_option("--n-from", n_from, "first horizon");
  paper->add_option("--n-to", n_to, "last horizon");
  paper->add_option("--systems", systems, "subset of 'abcd' to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (stationary->parsed()) return cmd_stationary(opt);
    if (certify->parsed()) return cmd_certify(opt, gamma, cert_horizon, terminal);
    if (bounds->parsed()) return cmd_bounds(opt, horizons);
    if (exact->parsed()) return cmd_exact(opt, exact_horizons, gamma_tol);
    if (estimate->parsed()) return cmd_estimate(opt, est_gamma, measurements);
    if (paper->parsed())
      return cmd_paper_experiments(opt, out_dir, n_from, n_to, systems);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
