#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qtur/divergences.hpp"
#include "qtur/matrix_core.hpp"
#include "qtur/ns_map.hpp"

namespace qtur {

// (mean difference, variance under rho, variance under sigma): everything the
// closed-form bound consumes.
struct MomentSummary {
  double mean_diff;   // a = <theta>_rho - <theta>_sigma
  double var_rho;     // y
  double var_sigma;   // z
};

MomentSummary observable_moments(const Observable& theta_hat,
                                 const DensityMatrix& rho,
                                 const DensityMatrix& sigma);

struct BoundReport {
  DivergenceValue divergence;
  double lower_bound;
  double slack;  // divergence - lower_bound (+inf when divergence is)
  bool satisfied;
  std::string context;

  nlohmann::json to_json() const;
};

// f_lambda(x, y, z) = lambda x^2 / ((1-lambda) y + lambda z + (1-lambda) lambda x^2),
// nonnegative and decreasing in y and z. f_1(x, y, 0) with x != 0 is +inf.
double f_lambda(double x, double y, double z, Lambda lambda);

// F(a, y, z) = integral of f_lambda over lambda in [0, 1], in closed form:
//   r ln(r/s) + (1-r) ln((1-r)/(1-s))
// with b = a^2 + z - y, v = sqrt(y + b^2/(4 a^2)), r = 1/2 + b/(4|a|v),
// s = r - |a|/(2v). Even in the sign of a (bit for bit); returns 0 when
// |a| < tol::a_cutoff. Throws InvalidMoments if r or s leaves [0, 1] by more
// than 1e-9 (never observed for y, z >= 0); boundary grazes are clamped.
double F_closed_form(const MomentSummary& m);

struct HcrReport {
  DivergenceValue chi2;
  double lower_bound;  // |<Theta>_P - <Theta>_Q|^2 / <<Theta>>_Q
  bool satisfied;
};

// Hammersley-Chapman-Robbins bound for complex variables. Throws ZeroVariance
// when <<Theta>>_Q < 1e-15 while the means differ.
HcrReport hcr_bound(const ClassicalDistribution& p,
                    const ClassicalDistribution& q,
                    const ComplexRandomVariable& theta);

// chi^2_lambda[rho, sigma] >= lambda f_lambda(a, <<theta>>_rho, <<theta>>_sigma).
BoundReport chi2_lambda_tur_check(const DensityMatrix& rho,
                                  const DensityMatrix& sigma,
                                  const Observable& theta_hat, Lambda lambda,
                                  double tolerance = 1e-9);

// S(rho||sigma) >= F(a, <<theta>>_rho, <<theta>>_sigma).
BoundReport entropy_tur_check(const DensityMatrix& rho,
                              const DensityMatrix& sigma,
                              const Observable& theta_hat,
                              double tolerance = 1e-8);

// (<<theta>>_rho + <<theta>>_sigma) / ((1/2) a^2) >= (1 - delta)/delta for
// a != 0. The report's divergence slot carries the variance ratio (the
// inequality's left side) and lower_bound its right side. Throws
// DegenerateMeans when |a| <= 1e-9.
BoundReport triangular_tur_check(const DensityMatrix& rho,
                                 const DensityMatrix& sigma,
                                 const Observable& theta_hat,
                                 double tolerance = 1e-9);

// h(x) = x tanh(x/2), strictly increasing on x >= 0.
double exchange_tur_h(double x);
// Inverse of h by bisection; |h(g(x)) - x| <= 1e-12. Throws
// NonPositiveArgument for x <= 0.
double exchange_tur_g(double x);

// Exchange TUR for an equilibrium ensemble (forward = backward distribution p,
// involution pi, theta(pi(g)) = -theta(g)):
//   <<theta>>_p / <theta>_p^2 >= 1 / sinh(g(<Sigma_cl>)/2)^2.
BoundReport exchange_tur_check(const ClassicalDistribution& p,
                               const std::vector<double>& theta,
                               const std::vector<int>& involution,
                               double tolerance = 1e-9);

}  // namespace qtur
