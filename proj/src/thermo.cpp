#include "qtur/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "qtur/errors.hpp"

namespace qtur {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};
constexpr double kInf = std::numeric_limits<double>::infinity();

// Least-squares slope of ln(y) against ln(x).
double log_log_slope(const std::vector<double>& x,
                     const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += std::log(x[k]);
    my += std::log(y[k]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = std::log(x[k]) - mx;
    sxy += dx * (std::log(y[k]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

void require_positive_taus(const std::vector<double>& taus, const char* what) {
  if (taus.empty()) {
    throw ConfigError(std::string(what) + ": empty tau list");
  }
  for (double tau : taus) {
    if (!(tau > 0.0)) {
      throw ConfigError(std::string(what) + ": tau values must be positive");
    }
  }
}

}  // namespace

ResetProtocol protocol_from_string(const std::string& name) {
  if (name == "bath_reset") return ResetProtocol::BathReset;
  if (name == "both_reset") return ResetProtocol::BothReset;
  throw ConfigError("unknown protocol '" + name +
                    "' (expected bath_reset or both_reset)");
}

std::string to_string(ResetProtocol protocol) {
  return protocol == ResetProtocol::BathReset ? "bath_reset" : "both_reset";
}

ThermoSetup::ThermoSetup(DensityMatrix rho_s, DensityMatrix rho_e,
                         Unitary joint_u, ResetProtocol proto)
    : rho_S(std::move(rho_s)),
      rho_E(std::move(rho_e)),
      u(std::move(joint_u)),
      protocol(proto) {
  if (u.dim() != dim_S() * dim_E()) {
    std::ostringstream os;
    os << "ThermoSetup: unitary dim " << u.dim() << " != " << dim_S() << "*"
       << dim_E();
    throw DimensionMismatch(os.str());
  }
}

ForwardStates forward_states(const ThermoSetup& setup) {
  const int ds = setup.dim_S();
  const int de = setup.dim_E();
  const ComplexMatrix joint0 =
      tensor_product(setup.rho_S.matrix(), setup.rho_E.matrix());
  DensityMatrix rho = evolve(DensityMatrix(joint0), setup.u);
  DensityMatrix rho_s_t(
      partial_trace(rho.matrix(), ds, de, Subsystem::Environment));
  DensityMatrix rho_e_t(partial_trace(rho.matrix(), ds, de, Subsystem::System));
  ComplexMatrix sigma = setup.protocol == ResetProtocol::BathReset
                            ? tensor_product(rho_s_t.matrix(),
                                             setup.rho_E.matrix())
                            : joint0;
  return ForwardStates{std::move(rho), DensityMatrix(std::move(sigma)),
                       std::move(rho_s_t), std::move(rho_e_t)};
}

DivergenceValue entropy_production(const ThermoSetup& setup) {
  const ForwardStates fs = forward_states(setup);
  return quantum_relative_entropy(fs.rho, fs.sigma);
}

nlohmann::json FluxSummary::to_json() const {
  return nlohmann::json{{"phi", phi}, {"var_t", var_t}, {"var_0", var_0}};
}

std::pair<FluxSummary, BoundReport> entropy_flux_tur(const ThermoSetup& setup) {
  if (!setup.rho_E.full_rank()) {
    throw SingularEnvironment(
        "entropy_flux_tur: ln rho_E needs a strictly positive environment");
  }
  const ForwardStates fs = forward_states(setup);
  // The flux observable I_S (x) ln rho_E is local to E, so its moments under
  // the joint states equal the moments of ln rho_E under the E marginals.
  const Observable log_env(matrix_log_psd(setup.rho_E));

  FluxSummary flux;
  flux.phi = expectation(log_env, setup.rho_E) - expectation(log_env, fs.rho_E_t);
  flux.var_t = variance(log_env, fs.rho_E_t);
  flux.var_0 = variance(log_env, setup.rho_E);

  BoundReport report;
  report.divergence = quantum_relative_entropy(fs.rho, fs.sigma);
  report.lower_bound = F_closed_form({flux.phi, flux.var_t, flux.var_0});
  if (report.divergence.is_finite()) {
    report.slack = report.divergence.value() - report.lower_bound;
    report.satisfied = report.slack >= -1e-8;
  } else {
    report.slack = kInf;
    report.satisfied = true;
  }
  report.context = "entropy_flux_tur protocol=" + to_string(setup.protocol);
  return {flux, report};
}

DivergenceValue unitary_chi2(const DensityMatrix& rho, const Unitary& u,
                             Lambda lambda) {
  if (rho.dim() != u.dim()) {
    throw DimensionMismatch("unitary_chi2: dims differ");
  }
  // U rho U^dag has the same spectrum as rho with eigenvectors U|p_j>, so the
  // overlap matrix is <p_i|U|p_j>.
  const ComplexMatrix overlaps =
      rho.eigenvectors().adjoint() * u.matrix() * rho.eigenvectors();
  return chi2_lambda_from_overlaps(rho.eigenvalues(), rho.eigenvalues(),
                                   overlaps, lambda);
}

Unitary hamiltonian_evolution(const Observable& h, double tau) {
  const Spectrum spec = spectral_decompose(h.matrix());
  const int n = static_cast<int>(spec.values.size());
  ComplexMatrix u = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const ComplexVector v = spec.vectors.col(k);
    u += std::exp(-kImag * (spec.values(k) * tau)) * (v * v.adjoint());
  }
  return Unitary(u);
}

QfiExpansionReport qfi_expansion_check(const DensityMatrix& rho,
                                       const Observable& h,
                                       const std::vector<double>& taus) {
  if (rho.dim() != h.dim()) {
    throw DimensionMismatch("qfi_expansion_check: dims differ");
  }
  if (!rho.full_rank()) {
    throw SingularState("qfi_expansion_check: rho must be full rank");
  }
  require_positive_taus(taus, "qfi_expansion_check");

  QfiExpansionReport report;
  report.qfi = quantum_fisher_information(rho, h);
  report.taus = taus;
  std::sort(report.taus.begin(), report.taus.end());
  std::vector<double> fit_tau, fit_err;
  for (double tau : report.taus) {
    const Unitary u = hamiltonian_evolution(h, tau);
    const double delta = unitary_chi2(rho, u, Lambda(0.5)).value();
    const double residual = std::fabs(delta - report.qfi * tau * tau / 4.0);
    report.deltas.push_back(delta);
    report.residuals.push_back(residual);
    if (residual > 1e-16) {
      fit_tau.push_back(tau);
      fit_err.push_back(residual);
    }
  }
  if (fit_tau.size() < 2) {
    // Remainder at the noise floor everywhere ([rho, H] = 0, say).
    report.trivial = true;
    report.slope = std::numeric_limits<double>::quiet_NaN();
    report.satisfied = true;
    return report;
  }
  report.trivial = false;
  report.slope = log_log_slope(fit_tau, fit_err);
  report.satisfied = report.slope >= 3.5;
  return report;
}

CrLimitReport cramer_rao_limit_check(const DensityMatrix& rho,
                                     const Observable& h,
                                     const Observable& theta_hat,
                                     const std::vector<double>& taus) {
  if (rho.dim() != h.dim() || rho.dim() != theta_hat.dim()) {
    throw DimensionMismatch("cramer_rao_limit_check: dims differ");
  }
  if (!rho.full_rank()) {
    throw SingularState("cramer_rao_limit_check: rho must be full rank");
  }
  require_positive_taus(taus, "cramer_rao_limit_check");
  if (taus.size() < 2) {
    throw ConfigError("cramer_rao_limit_check: need at least two tau values");
  }

  CrLimitReport report;
  report.qfi = quantum_fisher_information(rho, h);
  const ComplexMatrix comm = h.matrix() * rho.matrix() - rho.matrix() * h.matrix();
  report.derivative_oracle =
      ((-kImag) * (theta_hat.matrix() * comm).trace()).real();
  if (std::fabs(report.derivative_oracle) <= 1e-8) {
    throw DegenerateDerivative(
        "cramer_rao_limit_check: d<theta>/dt vanishes at t=0");
  }
  report.rhs = 4.0 / report.qfi;

  const double mean0 = expectation(theta_hat, rho);
  const double var0 = variance(theta_hat, rho);
  report.taus = taus;
  std::sort(report.taus.begin(), report.taus.end(), std::greater<double>());
  report.inequality_ok = true;
  for (double tau : report.taus) {
    const DensityMatrix rho_tau = evolve(rho, hamiltonian_evolution(h, tau));
    const double fd = (expectation(theta_hat, rho_tau) - mean0) / tau;
    if (std::fabs(fd) <= 1e-8) {
      throw DegenerateDerivative(
          "cramer_rao_limit_check: finite-difference rate vanished");
    }
    const double lhs = 4.0 * var0 / (fd * fd);
    report.fd_derivatives.push_back(fd);
    report.lhs.push_back(lhs);
    if (lhs < report.rhs - 1e-9) report.inequality_ok = false;
  }

  // Richardson extrapolation in tau^2 from the two smallest taus; for a
  // rate-saturating observable the LHS is even in tau, so this removes the
  // leading correction and leaves an O(tau1^2 tau2^2) remainder.
  const std::size_t m = report.taus.size();
  const double x1 = report.taus[m - 2] * report.taus[m - 2];
  const double l1 = report.lhs[m - 2];
  const double x2 = report.taus[m - 1] * report.taus[m - 1];
  const double l2 = report.lhs[m - 1];
  report.extrapolated_lhs = (x1 * l2 - x2 * l1) / (x1 - x2);
  report.limit_ok =
      report.extrapolated_lhs >= report.rhs - 1e-6 * std::fabs(report.rhs);
  report.satisfied = report.inequality_ok && report.limit_ok;
  return report;
}

DensityMatrix thermal_state(double beta, const Observable& h) {
  if (beta < 0.0) {
    throw ConfigError("thermal_state: beta must be >= 0");
  }
  const Spectrum spec = spectral_decompose(h.matrix());
  const int n = static_cast<int>(spec.values.size());
  // Shift by the ground energy so the largest Boltzmann weight is exactly 1.
  const double e_min = spec.values.minCoeff();
  RealVector w(n);
  double z = 0.0;
  for (int k = 0; k < n; ++k) {
    w(k) = std::exp(-beta * (spec.values(k) - e_min));
    z += w(k);
  }
  ComplexMatrix state = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const ComplexVector v = spec.vectors.col(k);
    state += (w(k) / z) * (v * v.adjoint());
  }
  return DensityMatrix(state);
}

Unitary partial_swap(int dim, double angle) {
  if (dim < 1) {
    throw ConfigError("partial_swap: dim must be positive");
  }
  const int d2 = dim * dim;
  ComplexMatrix swap = ComplexMatrix::Zero(d2, d2);
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      swap(a * dim + b, b * dim + a) = 1.0;
    }
  }
  const ComplexMatrix u = std::cos(angle) * ComplexMatrix::Identity(d2, d2) +
                          kImag * std::sin(angle) * swap;
  return Unitary(u);
}

}  // namespace qtur
