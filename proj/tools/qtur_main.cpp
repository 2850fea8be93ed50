#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtur/campaign.hpp"
#include "qtur/errors.hpp"
#include "qtur/report.hpp"
#include "qtur/thermo.hpp"

namespace {

using namespace qtur;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct CliOptions {
  std::vector<int> dims;
  int n = 0;  // 0 = command default
  std::uint64_t seed = 42;
  std::vector<double> lambda_grid;
  std::vector<double> angles;
  std::vector<double> betas;
  std::string protocol = "bath-reset";
  std::string out = "-";
  std::string format = "csv";
  Tolerances tols;
};

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) os << ",";
    if constexpr (std::is_same_v<T, double>) {
      os << format_double(xs[i]);
    } else {
      os << xs[i];
    }
  }
  return os.str();
}

void validate_common(const CliOptions& opt) {
  if (opt.n < 1) throw ConfigError("--n must be >= 1");
  for (int d : opt.dims) {
    if (d < 2) throw ConfigError("--dims entries must be >= 2");
  }
  for (double lam : opt.lambda_grid) {
    if (!(lam >= 0.0 && lam <= 1.0)) {
      throw ConfigError("--lambda-grid entries must lie in [0, 1]");
    }
  }
}

ResetProtocol parse_protocol(const std::string& flag) {
  std::string key = flag;
  std::replace(key.begin(), key.end(), '-', '_');
  return protocol_from_string(key);
}

void echo_base_config(ReportTable& table, const std::string& command,
                      const CliOptions& opt) {
  table.add_config("command", command);
  table.add_config("dims", join(opt.dims));
  table.add_config("n", std::to_string(opt.n));
  table.add_config("seed", std::to_string(opt.seed));
  table.add_config("format", opt.format);
}

int cmd_verify(CliOptions opt) {
  if (opt.dims.empty()) opt.dims = {2, 3, 4, 6};
  if (opt.n == 0) opt.n = 1000;
  if (opt.lambda_grid.empty()) {
    opt.lambda_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  }
  validate_common(opt);

  const std::vector<VerifyRow> rows =
      run_verify_campaign(opt.dims, opt.n, opt.seed, opt.lambda_grid, opt.tols);

  ReportTable table;
  table.columns = {"instance",        "dim",
                   "rank_rho",        "seed",
                   "relative_entropy", "f_bound",
                   "entropy_slack",   "chi2_min_slack",
                   "chain_margin",    "ns_kl_gap",
                   "mean_gap",        "var_margin",
                   "triangular_slack", "delta_symmetry_gap",
                   "status",          "failure"};
  echo_base_config(table, "verify", opt);
  table.add_config("lambda_grid", join(opt.lambda_grid));
  table.add_config("tol_entropy_slack", format_double(opt.tols.entropy_slack));
  table.add_config("tol_chi2_slack", format_double(opt.tols.chi2_slack));

  int violations = 0;
  double min_slack = kInf, max_slack = -kInf;
  for (const VerifyRow& r : rows) {
    if (std::isfinite(r.entropy_slack)) {
      min_slack = std::min(min_slack, r.entropy_slack);
      max_slack = std::max(max_slack, r.entropy_slack);
    }
    if (!r.ok) {
      ++violations;
      nlohmann::json blob =
          make_verify_instance(opt.dims, opt.seed, r.instance).to_json();
      blob["failure"] = r.failure;
      table.violations.push_back(std::move(blob));
    }
    table.add_row({std::to_string(r.instance), std::to_string(r.dim),
                   std::to_string(r.rank_rho), std::to_string(r.seed),
                   format_double(r.entropy), format_double(r.f_bound),
                   format_double(r.entropy_slack),
                   format_double(r.chi2_min_slack),
                   format_double(r.chain_margin), format_double(r.ns_kl_gap),
                   format_double(r.mean_gap), format_double(r.var_margin),
                   format_double(r.triangular_slack),
                   format_double(r.delta_gap), r.ok ? "ok" : "violation",
                   r.failure});
  }
  table.summary["instances"] = opt.n;
  table.summary["violations"] = violations;
  table.summary["min_entropy_slack"] = format_double(min_slack);
  table.summary["max_entropy_slack"] = format_double(max_slack);
  table.write(opt.out, opt.format);
  return violations == 0 ? 0 : 2;
}

int cmd_flux(CliOptions opt) {
  if (opt.dims.empty()) opt.dims = {2};
  if (opt.n == 0) opt.n = 1;
  if (opt.betas.empty()) opt.betas = {0.2, 1.0};
  if (opt.angles.empty()) {
    for (int k = 0; k <= 15; ++k) opt.angles.push_back(0.1 * k);
  }
  validate_common(opt);
  if (opt.betas.size() != 2) {
    throw ConfigError("--betas needs exactly two values (beta_S, beta_E)");
  }
  if (opt.betas[0] < 0.0 || opt.betas[1] < 0.0) {
    throw ConfigError("--betas entries must be >= 0");
  }
  const ResetProtocol protocol = parse_protocol(opt.protocol);

  const std::vector<FluxRow> rows =
      run_flux_sweep(opt.dims[0], opt.betas[0], opt.betas[1], opt.angles,
                     protocol, opt.tols);

  ReportTable table;
  table.columns = {"angle", "sigma", "phi", "var_t", "var_0", "bound", "slack"};
  echo_base_config(table, "flux", opt);
  table.add_config("betas", join(opt.betas));
  table.add_config("angles", join(opt.angles));
  table.add_config("protocol", to_string(protocol));
  table.add_config("tol_flux_slack", format_double(opt.tols.flux_slack));

  int violations = 0;
  bool sign_flip_all = true;
  double min_slack = kInf;
  for (const FluxRow& r : rows) {
    sign_flip_all = sign_flip_all && r.sign_flip_exact;
    if (std::isfinite(r.slack)) min_slack = std::min(min_slack, r.slack);
    if (!r.satisfied || !r.sign_flip_exact) {
      ++violations;
      table.violations.push_back(nlohmann::json{
          {"angle", r.angle},
          {"betas", opt.betas},
          {"dim", opt.dims[0]},
          {"protocol", to_string(protocol)},
          {"failure", !r.satisfied ? "flux_tur" : "sign_flip"}});
    }
    table.add_row({format_double(r.angle), format_double(r.entropy),
                   format_double(r.phi), format_double(r.var_t),
                   format_double(r.var_0), format_double(r.bound),
                   format_double(r.slack)});
  }
  table.summary["violations"] = violations;
  table.summary["min_slack"] = format_double(min_slack);
  table.summary["sign_flip_exact"] = sign_flip_all;
  table.write(opt.out, opt.format);
  return violations == 0 ? 0 : 2;
}

int cmd_cr_limit(CliOptions opt) {
  if (opt.dims.empty()) opt.dims = {2};
  if (opt.n == 0) opt.n = 1;
  validate_common(opt);

  const std::vector<double> scan_taus = {1e-1, 1e-2, 1e-3, 1e-4};
  const std::vector<double> expansion_taus = {1e-3,    2.15e-3, 4.64e-3, 1e-2,
                                              2.15e-2, 4.64e-2, 1e-1};

  ReportTable table;
  table.columns = {"instance", "tau", "qfi", "lhs", "rhs", "gap", "status"};
  echo_base_config(table, "cr-limit", opt);

  int violations = 0;
  nlohmann::json per_instance = nlohmann::json::array();
  for (int i = 0; i < opt.n; ++i) {
    DensityMatrix rho = [&] {
      if (i == 0) {
        RealVector probs(2);
        probs << 0.8, 0.2;
        return DensityMatrix::diagonal(probs);
      }
      const std::uint64_t s = mix_seed(opt.seed, static_cast<std::uint64_t>(i));
      return random_density_matrix(2, 2, mix_seed(s, 1));
    }();
    Observable h = [&] {
      if (i == 0) return Observable(pauli_y());
      const std::uint64_t s = mix_seed(opt.seed, static_cast<std::uint64_t>(i));
      return random_observable(2, 1.0, mix_seed(s, 2));
    }();
    Observable theta = [&] {
      if (i == 0) return Observable(pauli_x());
      const std::uint64_t s = mix_seed(opt.seed, static_cast<std::uint64_t>(i));
      return random_observable(2, 1.0, mix_seed(s, 3));
    }();

    nlohmann::json inst_summary;
    inst_summary["instance"] = i;
    try {
      const CrLimitReport cr = cramer_rao_limit_check(rho, h, theta, scan_taus);
      const QfiExpansionReport qe = qfi_expansion_check(rho, h, expansion_taus);
      for (std::size_t k = 0; k < cr.taus.size(); ++k) {
        table.add_row({std::to_string(i), format_double(cr.taus[k]),
                       format_double(cr.qfi), format_double(cr.lhs[k]),
                       format_double(cr.rhs),
                       format_double(cr.lhs[k] - cr.rhs), "ok"});
      }
      inst_summary["qfi"] = format_double(cr.qfi);
      inst_summary["extrapolated_lhs"] = format_double(cr.extrapolated_lhs);
      inst_summary["remainder_slope"] =
          qe.trivial ? nlohmann::json("trivial")
                     : nlohmann::json(format_double(qe.slope));
      inst_summary["cr_satisfied"] = cr.satisfied;
      inst_summary["expansion_satisfied"] = qe.satisfied;
      if (!cr.satisfied || !qe.satisfied) {
        ++violations;
        table.violations.push_back(nlohmann::json{
            {"instance", i},
            {"rho", complex_matrix_to_json(rho.matrix())},
            {"h", complex_matrix_to_json(h.matrix())},
            {"theta", complex_matrix_to_json(theta.matrix())},
            {"failure", !cr.satisfied ? "cr_limit" : "qfi_expansion"}});
      }
    } catch (const DegenerateDerivative&) {
      // Commuting (rho, H): F_Q and the drift vanish; flagged, not a failure.
      const double qfi = quantum_fisher_information(rho, h);
      for (double tau : scan_taus) {
        table.add_row({std::to_string(i), format_double(tau),
                       format_double(qfi), "nan", "nan", "nan", "degenerate"});
      }
      inst_summary["degenerate"] = true;
    }
    per_instance.push_back(std::move(inst_summary));
  }
  table.summary["instances"] = per_instance;
  table.summary["violations"] = violations;
  table.write(opt.out, opt.format);
  return violations == 0 ? 0 : 2;
}

int cmd_bound_table(CliOptions opt) {
  if (opt.dims.empty()) opt.dims = {2, 3, 4, 6};
  if (opt.n == 0) opt.n = 200;
  if (opt.lambda_grid.empty()) {
    opt.lambda_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  }
  validate_common(opt);

  struct Row {
    VerifyInstance inst;
    double entropy, f_bound, best_lambda_f, slack;
    bool ok;
  };
  const auto rows = parallel_map(opt.n, [&](int i) {
    VerifyInstance inst = make_verify_instance(opt.dims, opt.seed, i);
    const DivergenceValue s = quantum_relative_entropy(inst.rho, inst.sigma);
    const MomentSummary m =
        observable_moments(inst.theta, inst.rho, inst.sigma);
    const double f_bound = F_closed_form(m);
    double best = 0.0;
    for (double lam : opt.lambda_grid) {
      const double f =
          f_lambda(m.mean_diff, m.var_rho, m.var_sigma, Lambda(lam));
      if (std::isfinite(f)) best = std::max(best, lam * f);
    }
    const double slack = s.is_finite() ? s.value() - f_bound : kInf;
    const bool ok = !s.is_finite() || slack >= -opt.tols.entropy_slack;
    return Row{std::move(inst), s.value(), f_bound, best, slack, ok};
  });

  ReportTable table;
  table.columns = {"instance", "dim",           "sigma", "f_bound",
                   "best_lambda_f", "slack"};
  echo_base_config(table, "bound-table", opt);
  table.add_config("lambda_grid", join(opt.lambda_grid));

  int violations = 0;
  for (const Row& r : rows) {
    if (!r.ok) {
      ++violations;
      nlohmann::json blob = r.inst.to_json();
      blob["failure"] = "entropy_tur";
      table.violations.push_back(std::move(blob));
    }
    table.add_row({std::to_string(r.inst.instance),
                   std::to_string(r.inst.dim), format_double(r.entropy),
                   format_double(r.f_bound), format_double(r.best_lambda_f),
                   format_double(r.slack)});
  }
  table.summary["violations"] = violations;
  table.write(opt.out, opt.format);
  return violations == 0 ? 0 : 2;
}

int cmd_reduce(CliOptions opt) {
  if (opt.dims.empty()) opt.dims = {2, 3, 4, 5, 6, 7, 8};
  if (opt.n == 0) opt.n = 500;
  validate_common(opt);

  const auto rows = parallel_map(opt.n, [&](int i) {
    return run_reduce_instance(opt.dims, opt.seed, i, opt.tols);
  });

  ReportTable table;
  table.columns = {"instance", "dim", "max_discrepancy", "status"};
  echo_base_config(table, "reduce", opt);
  table.add_config("tol_reduction", format_double(opt.tols.reduction));

  int violations = 0;
  double worst = 0.0;
  for (const ReduceRow& r : rows) {
    worst = std::max(worst, r.max_discrepancy);
    if (!r.ok) {
      ++violations;
      table.violations.push_back(nlohmann::json{
          {"instance", r.instance},
          {"dim", r.dim},
          {"seed", r.seed},
          {"max_discrepancy", r.max_discrepancy}});
    }
    table.add_row({std::to_string(r.instance), std::to_string(r.dim),
                   format_double(r.max_discrepancy),
                   r.ok ? "ok" : "violation"});
  }
  table.summary["violations"] = violations;
  table.summary["max_discrepancy"] = format_double(worst);
  table.write(opt.out, opt.format);
  return violations == 0 ? 0 : 2;
}

void add_common_options(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--dims", opt.dims, "Hilbert-space dimensions")
      ->delimiter(',');
  cmd->add_option("--n", opt.n, "Number of instances")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opt.seed, "Campaign seed");
  cmd->add_option("--lambda-grid", opt.lambda_grid, "Lambda grid in [0, 1]")
      ->delimiter(',');
  cmd->add_option("--angles", opt.angles, "Partial-swap angle grid")
      ->delimiter(',');
  cmd->add_option("--betas", opt.betas, "Inverse temperatures beta_S,beta_E")
      ->delimiter(',');
  cmd->add_option("--protocol", opt.protocol, "Backward reference protocol")
      ->check(CLI::IsMember({"bath-reset", "both-reset"}));
  cmd->add_option("--out", opt.out, "Output path ('-' = stdout)");
  cmd->add_option("--format", opt.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}));

  cmd->add_option("--tol-entropy-slack", opt.tols.entropy_slack);
  cmd->add_option("--tol-chi2-slack", opt.tols.chi2_slack);
  cmd->add_option("--tol-chain-slack", opt.tols.chain_slack);
  cmd->add_option("--tol-ns-kl", opt.tols.ns_kl);
  cmd->add_option("--tol-ns-mean", opt.tols.ns_mean);
  cmd->add_option("--tol-ns-var", opt.tols.ns_var);
  cmd->add_option("--tol-triangular-slack", opt.tols.triangular_slack);
  cmd->add_option("--tol-delta-symmetry", opt.tols.delta_symmetry);
  cmd->add_option("--tol-operator-route", opt.tols.operator_route);
  cmd->add_option("--tol-reduction", opt.tols.reduction);
  cmd->add_option("--tol-flux-slack", opt.tols.flux_slack);
  cmd->add_option("--tol-second-law", opt.tols.second_law);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qtur: entropy-production TUR verification toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI/TOML file");

  CliOptions verify_opt, flux_opt, cr_opt, table_opt, reduce_opt;
  CLI::App* verify = app.add_subcommand(
      "verify", "Randomized divergence/bound campaigns");
  add_common_options(verify, verify_opt);
  CLI::App* flux = app.add_subcommand(
      "flux", "Thermal collision sweep with the entropy-flux TUR");
  add_common_options(flux, flux_opt);
  CLI::App* cr = app.add_subcommand(
      "cr-limit", "Finite-tau Cramer-Rao limit and QFI expansion scan");
  add_common_options(cr, cr_opt);
  CLI::App* btable = app.add_subcommand(
      "bound-table", "Entropy vs closed-form bound comparison table");
  add_common_options(btable, table_opt);
  CLI::App* reduce = app.add_subcommand(
      "reduce", "Classical-vs-quantum route reduction checks");
  add_common_options(reduce, reduce_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (verify->parsed()) return cmd_verify(std::move(verify_opt));
    if (flux->parsed()) return cmd_flux(std::move(flux_opt));
    if (cr->parsed()) return cmd_cr_limit(std::move(cr_opt));
    if (btable->parsed()) return cmd_bound_table(std::move(table_opt));
    if (reduce->parsed()) return cmd_reduce(std::move(reduce_opt));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
