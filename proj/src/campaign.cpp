#include "qtur/campaign.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "qtur/errors.hpp"
#include "qtur/ns_map.hpp"
#include "qtur/report.hpp"

namespace qtur {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Campaign stream tags keep instance streams disjoint across commands that
// share a seed.
constexpr std::uint64_t kVerifyTag = 0x7665;
constexpr std::uint64_t kOperatorTag = 0x6f70;
constexpr std::uint64_t kReduceTag = 0x7264;
constexpr std::uint64_t kSecondLawTag = 0x736c;

bool bitwise_equal(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace

nlohmann::json VerifyInstance::to_json() const {
  return nlohmann::json{{"instance", instance},
                        {"dim", dim},
                        {"rank_rho", rank_rho},
                        {"seed", seed},
                        {"rho", complex_matrix_to_json(rho.matrix())},
                        {"sigma", complex_matrix_to_json(sigma.matrix())},
                        {"theta", complex_matrix_to_json(theta.matrix())}};
}

VerifyInstance make_verify_instance(const std::vector<int>& dims,
                                    std::uint64_t campaign_seed, int index) {
  if (dims.empty()) throw ConfigError("make_verify_instance: no dims");
  const std::uint64_t s = mix_seed(mix_seed(campaign_seed, kVerifyTag),
                                   static_cast<std::uint64_t>(index));
  const int dim = dims[static_cast<std::size_t>(index) % dims.size()];
  // Every fifth rho is rank-deficient so support conventions get exercised.
  const int rank_rho = (index % 5 == 4 && dim > 1) ? dim - 1 : dim;
  return VerifyInstance{index,
                        dim,
                        rank_rho,
                        s,
                        random_density_matrix(dim, rank_rho, mix_seed(s, 1)),
                        random_density_matrix(dim, dim, mix_seed(s, 2)),
                        random_observable(dim, 1.0, mix_seed(s, 3))};
}

VerifyRow run_verify_instance(const VerifyInstance& inst,
                              const std::vector<double>& lambda_grid,
                              const Tolerances& tols) {
  VerifyRow row{inst.instance, inst.dim,  inst.rank_rho, inst.seed,
                0.0,           0.0,       0.0,           kInf,
                kInf,          0.0,       0.0,           0.0,
                kNan,          kNan,      true,          {}};
  const auto fail = [&row](const char* what) {
    if (row.ok) {
      row.ok = false;
      row.failure = what;
    }
  };

  const BoundReport ent =
      entropy_tur_check(inst.rho, inst.sigma, inst.theta, tols.entropy_slack);
  row.entropy = ent.divergence.value();
  row.f_bound = ent.lower_bound;
  row.entropy_slack = ent.slack;
  if (!ent.satisfied) fail("entropy_tur");

  const NSPair pair = ns_pair(inst.rho, inst.sigma, inst.theta);
  const DivergenceValue ns_kl =
      classical_kl_divergence(pair.p_dist, pair.q_dist);
  if (ns_kl.is_finite() != ent.divergence.is_finite()) {
    row.ns_kl_gap = kInf;
    fail("ns_kl_identity");
  } else {
    row.ns_kl_gap = ns_kl.is_finite()
                        ? std::fabs(ns_kl.value() - ent.divergence.value())
                        : 0.0;
    if (row.ns_kl_gap > tols.ns_kl) fail("ns_kl_identity");
  }

  const ComplexMoments mp = complex_moments(pair.p_dist, pair.theta);
  const ComplexMoments mq = complex_moments(pair.q_dist, pair.theta);
  row.mean_gap = std::abs(
      mp.mean - std::complex<double>(expectation(inst.theta, inst.rho), 0.0));
  if (row.mean_gap > tols.ns_mean) fail("ns_mean_identity");

  const VarianceDominationReport vd =
      variance_domination_check(pair, inst.rho, inst.sigma, inst.theta);
  row.var_margin = std::min(vd.margin_p, vd.margin_q);
  if (row.var_margin < -tols.ns_var) fail("ns_variance_domination");

  const MomentSummary m = observable_moments(inst.theta, inst.rho, inst.sigma);
  const double x_ns = std::abs(mp.mean - mq.mean);
  for (double lam : lambda_grid) {
    const Lambda lambda(lam);
    const BoundReport c = chi2_lambda_tur_check(inst.rho, inst.sigma,
                                                inst.theta, lambda,
                                                tols.chi2_slack);
    if (!c.satisfied) fail("chi2_tur");
    if (c.divergence.is_finite() && std::isfinite(c.slack)) {
      row.chi2_min_slack = std::min(row.chi2_min_slack, c.slack);
    }

    // Two-step chain: chi2 >= lam f(NS moments) >= lam f(quantum moments).
    const DivergenceValue chi_ns =
        classical_chi2_lambda(pair.p_dist, pair.q_dist, lambda);
    const double f_ns = f_lambda(x_ns, mp.variance, mq.variance, lambda);
    const double f_q = f_lambda(m.mean_diff, m.var_rho, m.var_sigma, lambda);
    double chain1;
    if (!chi_ns.is_finite()) {
      chain1 = kInf;
    } else if (std::isinf(f_ns)) {
      chain1 = -kInf;
    } else {
      chain1 = chi_ns.value() - lam * f_ns;
    }
    double chain2;
    if (std::isinf(f_ns)) {
      chain2 = kInf;
    } else if (std::isinf(f_q)) {
      chain2 = -kInf;
    } else {
      chain2 = lam * (f_ns - f_q);
    }
    row.chain_margin = std::min({row.chain_margin, chain1, chain2});
  }
  if (row.chain_margin < -tols.chain_slack) fail("moment_chain");

  if (std::fabs(m.mean_diff) > 1e-3) {
    const BoundReport tri = triangular_tur_check(inst.rho, inst.sigma,
                                                 inst.theta,
                                                 tols.triangular_slack);
    row.triangular_slack = tri.slack;
    if (!tri.satisfied) fail("triangular_tur");
    row.delta_gap =
        std::fabs(triangular_discrimination(inst.rho, inst.sigma).value() -
                  triangular_discrimination(inst.sigma, inst.rho).value());
    if (row.delta_gap > tols.delta_symmetry) fail("delta_symmetry");
  }
  return row;
}

std::vector<VerifyRow> run_verify_campaign(
    const std::vector<int>& dims, int n_instances, std::uint64_t seed,
    const std::vector<double>& lambda_grid, const Tolerances& tols) {
  return parallel_map(n_instances, [&](int i) {
    return run_verify_instance(make_verify_instance(dims, seed, i),
                               lambda_grid, tols);
  });
}

OperatorRouteRow run_operator_route_instance(
    const std::vector<int>& dims, std::uint64_t campaign_seed, int index,
    const std::vector<double>& lambdas, const Tolerances& tols) {
  if (dims.empty()) throw ConfigError("run_operator_route_instance: no dims");
  const std::uint64_t s = mix_seed(mix_seed(campaign_seed, kOperatorTag),
                                   static_cast<std::uint64_t>(index));
  const int dim = dims[static_cast<std::size_t>(index) % dims.size()];
  const int rank_rho = dim - ((index % 3 == 2 && dim > 1) ? 1 : 0);
  const int rank_sigma = dim - ((index % 4 == 3 && dim > 1) ? 1 : 0);
  const DensityMatrix rho = random_density_matrix(dim, rank_rho, mix_seed(s, 1));
  const DensityMatrix sigma =
      random_density_matrix(dim, rank_sigma, mix_seed(s, 2));

  double max_gap = 0.0;
  for (double lam : lambdas) {
    const Lambda lambda(lam);
    const DivergenceValue spectral = quantum_chi2_lambda(rho, sigma, lambda);
    const DivergenceValue op = chi2_lambda_operator_route(rho, sigma, lambda);
    if (spectral.is_finite() != op.is_finite()) {
      max_gap = kInf;
      break;
    }
    if (spectral.is_finite()) {
      max_gap = std::max(max_gap, std::fabs(spectral.value() - op.value()));
    }
  }
  return OperatorRouteRow{index,      dim,     rank_rho,
                          rank_sigma, s,       max_gap,
                          max_gap <= tols.operator_route};
}

std::vector<FluxRow> run_flux_sweep(int dim, double beta_s, double beta_e,
                                    const std::vector<double>& angles,
                                    ResetProtocol protocol,
                                    const Tolerances& tols) {
  if (dim < 2) throw ConfigError("run_flux_sweep: dim must be >= 2");
  Observable h = dim == 2 ? Observable(pauli_z()) : Observable::diagonal([&] {
    RealVector levels(dim);
    for (int k = 0; k < dim; ++k) levels(k) = static_cast<double>(k);
    return levels;
  }());
  const DensityMatrix rho_s = thermal_state(beta_s, h);
  const DensityMatrix rho_e = thermal_state(beta_e, h);

  return parallel_map(static_cast<int>(angles.size()), [&](int k) {
    const double angle = angles[static_cast<std::size_t>(k)];
    const ThermoSetup setup(rho_s, rho_e, partial_swap(dim, angle), protocol);
    const auto [flux, report] = entropy_flux_tur(setup);
    FluxRow row;
    row.angle = angle;
    row.entropy = report.divergence.value();
    row.phi = flux.phi;
    row.var_t = flux.var_t;
    row.var_0 = flux.var_0;
    row.bound = report.lower_bound;
    row.slack = report.slack;
    row.satisfied = !report.divergence.is_finite() ||
                    report.slack >= -tols.flux_slack;
    const double flipped =
        F_closed_form({-flux.phi, flux.var_t, flux.var_0});
    row.sign_flip_exact = bitwise_equal(row.bound, flipped);
    return row;
  });
}

ReduceRow run_reduce_instance(const std::vector<int>& dims,
                              std::uint64_t campaign_seed, int index,
                              const Tolerances& tols) {
  if (dims.empty()) throw ConfigError("run_reduce_instance: no dims");
  const std::uint64_t s = mix_seed(mix_seed(campaign_seed, kReduceTag),
                                   static_cast<std::uint64_t>(index));
  const int dim = dims[static_cast<std::size_t>(index) % dims.size()];
  std::mt19937_64 gen(s);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto draw_probs = [&] {
    std::vector<double> w(static_cast<std::size_t>(dim));
    double total = 0.0;
    for (double& x : w) {
      const double g = normal(gen);
      x = g * g + 1e-3;  // floor keeps both routes away from support cutoffs
      total += x;
    }
    for (double& x : w) x /= total;
    return w;
  };
  const std::vector<double> p = draw_probs();
  const std::vector<double> q = draw_probs();
  std::vector<double> theta(static_cast<std::size_t>(dim));
  for (double& x : theta) x = normal(gen);

  const ReductionReport rep = commuting_reduction_check(p, q, theta);
  return ReduceRow{index, dim, s, rep.max_discrepancy,
                   rep.max_discrepancy <= tols.reduction};
}

std::vector<SecondLawRow> run_second_law_campaign(int n_setups,
                                                  std::uint64_t seed,
                                                  const Tolerances& tols) {
  const auto pairs = parallel_map(n_setups, [&](int i) {
    const std::uint64_t s = mix_seed(mix_seed(seed, kSecondLawTag),
                                     static_cast<std::uint64_t>(i));
    const int d_s = 2 + (i % 2);
    const int d_e = 2;
    const DensityMatrix rho_s = random_density_matrix(d_s, d_s, mix_seed(s, 1));
    const DensityMatrix rho_e = random_density_matrix(d_e, d_e, mix_seed(s, 2));
    const Unitary u = random_unitary(d_s * d_e, mix_seed(s, 3));
    std::vector<SecondLawRow> both;
    for (ResetProtocol proto :
         {ResetProtocol::BathReset, ResetProtocol::BothReset}) {
      const ThermoSetup setup(rho_s, rho_e, u, proto);
      const DivergenceValue ep = entropy_production(setup);
      both.push_back(SecondLawRow{
          i, to_string(proto), ep.value(),
          !ep.is_finite() || ep.value() >= -tols.second_law});
    }
    return both;
  });
  std::vector<SecondLawRow> rows;
  rows.reserve(static_cast<std::size_t>(n_setups) * 2);
  for (const auto& pair : pairs) {
    rows.insert(rows.end(), pair.begin(), pair.end());
  }
  return rows;
}

}  // namespace qtur
