#include "qtur/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qtur/errors.hpp"

namespace qtur {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Guard against -0.0 and rounding leaks from variance computations.
double clamp_variance(double v, const char* label) {
  if (v < -1e-12) {
    std::ostringstream os;
    os << label << " is negative beyond tolerance: " << v;
    throw InvalidMoments(os.str());
  }
  return std::max(v, 0.0);
}

}  // namespace

MomentSummary observable_moments(const Observable& theta_hat,
                                 const DensityMatrix& rho,
                                 const DensityMatrix& sigma) {
  MomentSummary m;
  m.mean_diff = expectation(theta_hat, rho) - expectation(theta_hat, sigma);
  m.var_rho = clamp_variance(variance(theta_hat, rho), "var_rho");
  m.var_sigma = clamp_variance(variance(theta_hat, sigma), "var_sigma");
  return m;
}

nlohmann::json BoundReport::to_json() const {
  nlohmann::json j;
  j["divergence"] =
      divergence.is_finite() ? nlohmann::json(divergence.value()) : nlohmann::json("inf");
  j["lower_bound"] = lower_bound;
  j["slack"] = std::isinf(slack) ? nlohmann::json("inf") : nlohmann::json(slack);
  j["satisfied"] = satisfied;
  j["context"] = context;
  return j;
}

double f_lambda(double x, double y, double z, Lambda lambda) {
  y = std::max(y, 0.0);
  z = std::max(z, 0.0);
  const double l = lambda.value();
  const double num = l * x * x;
  if (num == 0.0) return 0.0;
  const double denom = (1.0 - l) * y + l * z + (1.0 - l) * num;
  if (denom <= 0.0) return kInf;  // only at lambda = 1 with z = 0
  return num / denom;
}

double F_closed_form(const MomentSummary& m) {
  const double a = std::fabs(m.mean_diff);  // F is even in the mean difference
  if (a < tol::a_cutoff) return 0.0;
  const double y = clamp_variance(m.var_rho, "var_rho");
  const double z = clamp_variance(m.var_sigma, "var_sigma");

  const double b = a * a + z - y;
  const double v = std::sqrt(y + (b * b) / (4.0 * a * a));
  // v = 0 would need y = 0 and b = 0, i.e. z = -a^2 < 0: unreachable here.
  double r = 0.5 + b / (4.0 * a * v);
  double s = r - a / (2.0 * v);

  // Exact arithmetic keeps r, s in [0, 1]; rounding may graze the boundary.
  const double stray = std::max({-r, r - 1.0, -s, s - 1.0});
  if (stray > 1e-9 || !std::isfinite(r) || !std::isfinite(s)) {
    std::ostringstream os;
    os << "closed-form bound left [0,1]: r=" << r << " s=" << s;
    throw InvalidMoments(os.str());
  }
  constexpr double kEdge = 1e-15;
  r = std::clamp(r, kEdge, 1.0 - kEdge);
  s = std::clamp(s, kEdge, 1.0 - kEdge);

  const double value = r * std::log(r / s) + (1.0 - r) * std::log((1.0 - r) / (1.0 - s));
  return std::max(value, 0.0);
}

HcrReport hcr_bound(const ClassicalDistribution& p,
                    const ClassicalDistribution& q,
                    const ComplexRandomVariable& theta) {
  const ComplexMoments mp = complex_moments(p, theta);
  const ComplexMoments mq = complex_moments(q, theta);
  const double diff2 = std::norm(mp.mean - mq.mean);

  HcrReport report;
  report.chi2 = classical_chi2_lambda(p, q, Lambda(1.0));
  if (mq.variance < 1e-15) {
    if (diff2 > 1e-18) {
      throw ZeroVariance("HCR bound undefined: <<Theta>>_Q vanishes while means differ");
    }
    report.lower_bound = 0.0;
  } else {
    report.lower_bound = diff2 / mq.variance;
  }
  report.satisfied =
      !report.chi2.is_finite() || report.chi2.value() >= report.lower_bound - 1e-9;
  return report;
}

namespace {

BoundReport assemble(DivergenceValue divergence, double lower_bound,
                     double tolerance, std::string context) {
  BoundReport report;
  report.divergence = divergence;
  report.lower_bound = lower_bound;
  if (divergence.is_finite()) {
    report.slack = divergence.value() - lower_bound;
    report.satisfied = report.slack >= -tolerance;
  } else {
    report.slack = kInf;
    report.satisfied = true;
  }
  report.context = std::move(context);
  return report;
}

}  // namespace

BoundReport chi2_lambda_tur_check(const DensityMatrix& rho,
                                  const DensityMatrix& sigma,
                                  const Observable& theta_hat, Lambda lambda,
                                  double tolerance) {
  const DivergenceValue chi2 = quantum_chi2_lambda(rho, sigma, lambda);
  const MomentSummary m = observable_moments(theta_hat, rho, sigma);
  const double f = f_lambda(m.mean_diff, m.var_rho, m.var_sigma, lambda);
  const double lower = std::isinf(f) ? kInf : lambda.value() * f;

  std::ostringstream ctx;
  ctx << "chi2_lambda_tur lambda=" << lambda.value();
  if (std::isinf(lower)) {
    // Infinite bound demands an infinite divergence.
    BoundReport report;
    report.divergence = chi2;
    report.lower_bound = kInf;
    report.slack = chi2.is_finite() ? -kInf : kInf;
    report.satisfied = !chi2.is_finite();
    report.context = ctx.str();
    return report;
  }
  return assemble(chi2, lower, tolerance, ctx.str());
}

BoundReport entropy_tur_check(const DensityMatrix& rho,
                              const DensityMatrix& sigma,
                              const Observable& theta_hat, double tolerance) {
  const DivergenceValue entropy = quantum_relative_entropy(rho, sigma);
  const MomentSummary m = observable_moments(theta_hat, rho, sigma);
  const double lower = F_closed_form(m);
  return assemble(entropy, lower, tolerance, "entropy_tur");
}

BoundReport triangular_tur_check(const DensityMatrix& rho,
                                 const DensityMatrix& sigma,
                                 const Observable& theta_hat, double tolerance) {
  const MomentSummary m = observable_moments(theta_hat, rho, sigma);
  if (std::fabs(m.mean_diff) <= 1e-9) {
    throw DegenerateMeans("triangular TUR needs distinct means");
  }
  const DivergenceValue delta = triangular_discrimination(rho, sigma);
  const double d = delta.value();
  if (d <= 0.0) {
    throw Error("triangular discrimination vanished despite distinct means");
  }
  const double lhs = (m.var_rho + m.var_sigma) / (0.5 * m.mean_diff * m.mean_diff);
  const double rhs = (1.0 - d) / d;

  std::ostringstream ctx;
  ctx << "triangular_tur delta=" << d;
  return assemble(DivergenceValue::finite(lhs), rhs, tolerance, ctx.str());
}

double exchange_tur_h(double x) { return x * std::tanh(0.5 * x); }

double exchange_tur_g(double x) {
  if (x <= 0.0) throw NonPositiveArgument("exchange_tur_g needs x > 0");
  double hi = 1.0;
  int guard = 0;
  while (exchange_tur_h(hi) < x) {
    hi *= 2.0;
    if (++guard > 1100) throw Error("exchange_tur_g: bracket expansion failed");
  }
  double lo = 0.0;
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-18; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (exchange_tur_h(mid) < x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

BoundReport exchange_tur_check(const ClassicalDistribution& p,
                               const std::vector<double>& theta,
                               const std::vector<int>& involution,
                               double tolerance) {
  const int n = p.support_size();
  if (static_cast<int>(theta.size()) != n ||
      static_cast<int>(involution.size()) != n) {
    throw DimensionMismatch("exchange_tur_check: size mismatch");
  }
  for (int g = 0; g < n; ++g) {
    const int pg = involution[static_cast<std::size_t>(g)];
    if (pg < 0 || pg >= n || involution[static_cast<std::size_t>(pg)] != g) {
      throw ConfigError("exchange_tur_check: involution is not self-inverse");
    }
    if (std::fabs(theta[static_cast<std::size_t>(pg)] +
                  theta[static_cast<std::size_t>(g)]) > 1e-12) {
      throw ConfigError("exchange_tur_check: theta is not antisymmetric under pi");
    }
  }

  // <Sigma> = sum_g p(g) ln(p(g)/p(pi(g))) for the equilibrium exchange setup.
  double sigma_mean = 0.0;
  bool sigma_infinite = false;
  double mean = 0.0;
  double second = 0.0;
  for (int g = 0; g < n; ++g) {
    const double pg = p[g];
    const double th = theta[static_cast<std::size_t>(g)];
    mean += pg * th;
    second += pg * th * th;
    if (pg <= 0.0) continue;
    const double pq = p[involution[static_cast<std::size_t>(g)]];
    if (pq <= 0.0) {
      sigma_infinite = true;
    } else {
      sigma_mean += pg * std::log(pg / pq);
    }
  }
  const double var = std::max(second - mean * mean, 0.0);

  BoundReport report;
  report.context = "exchange_tur";
  if (mean * mean < 1e-18) {
    // Precision diverges: the bound holds trivially.
    report.divergence = DivergenceValue::infinity();
    report.lower_bound = 0.0;
    report.slack = kInf;
    report.satisfied = true;
    report.context += " degenerate_mean";
    return report;
  }
  const double lhs = var / (mean * mean);
  if (sigma_infinite) {
    // g(+inf) = +inf, so the right side collapses to 0.
    return assemble(DivergenceValue::finite(lhs), 0.0, tolerance,
                    report.context + " sigma=inf");
  }
  sigma_mean = std::max(sigma_mean, 0.0);
  if (sigma_mean == 0.0) {
    // p is pi-symmetric, which forces <theta> = 0: caught above. Guard anyway.
    return assemble(DivergenceValue::finite(lhs), kInf, tolerance,
                    report.context + " sigma=0");
  }
  const double arg = std::sinh(0.5 * exchange_tur_g(sigma_mean));
  const double rhs = 1.0 / (arg * arg);

  std::ostringstream ctx;
  ctx << report.context << " sigma=" << sigma_mean;
  return assemble(DivergenceValue::finite(lhs), rhs, tolerance, ctx.str());
}

}  // namespace qtur
