#include "qtur/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "qtur/errors.hpp"

namespace qtur {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> validated_involution(std::vector<int> pi, int n) {
  if (static_cast<int>(pi.size()) != n) {
    throw DimensionMismatch("TrajectoryEnsemble: involution size mismatch");
  }
  for (int g = 0; g < n; ++g) {
    const int h = pi[static_cast<std::size_t>(g)];
    if (h < 0 || h >= n || pi[static_cast<std::size_t>(h)] != g) {
      throw ConfigError("TrajectoryEnsemble: involution is not self-inverse");
    }
  }
  return pi;
}

// Absolute gap between two extended reals; 0 when both are +inf.
double gap(const DivergenceValue& a, const DivergenceValue& b) {
  if (!a.is_finite() || !b.is_finite()) {
    return a.is_finite() == b.is_finite() ? 0.0 : kInf;
  }
  return std::fabs(a.value() - b.value());
}

}  // namespace

TrajectoryEnsemble::TrajectoryEnsemble(ClassicalDistribution fwd,
                                       ClassicalDistribution bwd,
                                       std::vector<int> pi,
                                       std::vector<double> theta)
    : forward(std::move(fwd)),
      backward(std::move(bwd)),
      involution(validated_involution(std::move(pi), forward.support_size())),
      observable(std::move(theta)) {
  if (backward.support_size() != n_traj() ||
      static_cast<int>(observable.size()) != n_traj()) {
    throw DimensionMismatch("TrajectoryEnsemble: field sizes disagree");
  }
}

TrajectoryEnsemble TrajectoryEnsemble::from_json(const nlohmann::json& j) {
  try {
    return TrajectoryEnsemble(
        ClassicalDistribution(j.at("forward").get<std::vector<double>>()),
        ClassicalDistribution(j.at("backward").get<std::vector<double>>()),
        j.at("involution").get<std::vector<int>>(),
        j.at("observable").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("TrajectoryEnsemble: bad JSON: ") + e.what());
  }
}

nlohmann::json TrajectoryEnsemble::to_json() const {
  return nlohmann::json{{"forward", forward.weights()},
                        {"backward", backward.weights()},
                        {"involution", involution},
                        {"observable", observable}};
}

DivergenceValue classical_entropy_production(const TrajectoryEnsemble& ens) {
  double sum = 0.0;
  for (int g = 0; g < ens.n_traj(); ++g) {
    const double pf = ens.forward[g];
    if (pf <= tol::denom_cutoff) continue;
    const double pb = ens.backward[ens.involution[static_cast<std::size_t>(g)]];
    if (pb <= tol::denom_cutoff) return DivergenceValue::infinity();
    sum += pf * std::log(pf / pb);
  }
  if (sum < 0.0 && sum > -1e-10) sum = 0.0;
  return DivergenceValue::finite(sum);
}

BoundReport classical_tur_check(const TrajectoryEnsemble& ens,
                                double tolerance) {
  const int n = ens.n_traj();
  // q(g) = P_B(pi(g)): the law of theta when the backward process draws the
  // conjugate trajectory.
  double mean_p = 0.0, second_p = 0.0, mean_q = 0.0, second_q = 0.0;
  for (int g = 0; g < n; ++g) {
    const double th = ens.observable[static_cast<std::size_t>(g)];
    const double pf = ens.forward[g];
    const double qg = ens.backward[ens.involution[static_cast<std::size_t>(g)]];
    mean_p += pf * th;
    second_p += pf * th * th;
    mean_q += qg * th;
    second_q += qg * th * th;
  }
  MomentSummary m;
  m.mean_diff = mean_p - mean_q;
  m.var_rho = std::max(second_p - mean_p * mean_p, 0.0);
  m.var_sigma = std::max(second_q - mean_q * mean_q, 0.0);

  BoundReport report;
  report.divergence = classical_entropy_production(ens);
  report.lower_bound = F_closed_form(m);
  if (report.divergence.is_finite()) {
    report.slack = report.divergence.value() - report.lower_bound;
    report.satisfied = report.slack >= -tolerance;
  } else {
    report.slack = kInf;
    report.satisfied = true;
  }
  report.context = "classical_tur";
  return report;
}

ReductionReport commuting_reduction_check(
    const std::vector<double>& p_eigs, const std::vector<double>& q_eigs,
    const std::vector<double>& theta_vals) {
  const std::size_t n = p_eigs.size();
  if (q_eigs.size() != n || theta_vals.size() != n) {
    throw DimensionMismatch("commuting_reduction_check: length mismatch");
  }
  const ClassicalDistribution p(p_eigs);
  const ClassicalDistribution q(q_eigs);
  const DensityMatrix rho =
      DensityMatrix::diagonal(Eigen::Map<const RealVector>(
          p_eigs.data(), static_cast<Eigen::Index>(n)));
  const DensityMatrix sigma =
      DensityMatrix::diagonal(Eigen::Map<const RealVector>(
          q_eigs.data(), static_cast<Eigen::Index>(n)));
  const Observable theta_hat =
      Observable::diagonal(Eigen::Map<const RealVector>(
          theta_vals.data(), static_cast<Eigen::Index>(n)));

  ReductionReport report{
      quantum_relative_entropy(rho, sigma),
      classical_kl_divergence(p, q),
      DivergenceValue::finite(0.0),  // filled below
      {0.1, 0.25, 0.5, 0.75, 0.9, 1.0},
      {},
      {},
      triangular_discrimination(rho, sigma),
      DivergenceValue::finite(0.0),  // filled below
      0.0,
      0.0,
      0.0,
      false};

  const NSPair pair = ns_pair(rho, sigma, theta_hat);
  report.kl_ns = classical_kl_divergence(pair.p_dist, pair.q_dist);

  for (double lam : report.lambdas) {
    report.chi2_quantum.push_back(quantum_chi2_lambda(rho, sigma, Lambda(lam)));
    report.chi2_classical.push_back(classical_chi2_lambda(p, q, Lambda(lam)));
  }

  // Triangular discrimination is the lambda = 1/2 chi^2 classically as well.
  report.triangular_classical = classical_chi2_lambda(p, q, Lambda(0.5));

  const MomentSummary quantum_m = observable_moments(theta_hat, rho, sigma);
  double mean_p = 0.0, second_p = 0.0, mean_q = 0.0, second_q = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    mean_p += p_eigs[s] * theta_vals[s];
    second_p += p_eigs[s] * theta_vals[s] * theta_vals[s];
    mean_q += q_eigs[s] * theta_vals[s];
    second_q += q_eigs[s] * theta_vals[s] * theta_vals[s];
  }
  const MomentSummary classical_m{mean_p - mean_q,
                                  std::max(second_p - mean_p * mean_p, 0.0),
                                  std::max(second_q - mean_q * mean_q, 0.0)};
  report.f_bound_quantum = F_closed_form(quantum_m);
  report.f_bound_classical = F_closed_form(classical_m);

  double worst = gap(report.kl_quantum, report.kl_classical);
  worst = std::max(worst, gap(report.kl_quantum, report.kl_ns));
  for (std::size_t k = 0; k < report.lambdas.size(); ++k) {
    worst = std::max(worst, gap(report.chi2_quantum[k], report.chi2_classical[k]));
  }
  worst = std::max(worst, gap(report.triangular_quantum, report.triangular_classical));
  worst = std::max(worst,
                   std::fabs(report.f_bound_quantum - report.f_bound_classical));
  report.max_discrepancy = worst;
  report.consistent = worst <= 1e-10;
  return report;
}

}  // namespace qtur
