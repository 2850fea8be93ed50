#pragma once

#include <limits>

#include "qtur/matrix_core.hpp"
#include "qtur/ns_map.hpp"

namespace qtur {

/// Extended-real divergence value: finite >= 0 (up to -1e-10 rounding) or +inf.
/// +inf is a first-class value, not an error, so bound reports can state
/// "trivially satisfied".
class DivergenceValue {
 public:
  DivergenceValue() : value_(0.0), finite_(true) {}  // finite zero

  static DivergenceValue finite(double v);
  static DivergenceValue infinity();

  bool is_finite() const { return finite_; }
  /// +inf when not finite.
  double value() const {
    return finite_ ? value_ : std::numeric_limits<double>::infinity();
  }

 private:
  DivergenceValue(double v, bool finite) : value_(v), finite_(finite) {}
  double value_;
  bool finite_;
};

class Lambda {
 public:
  explicit Lambda(double value);
  double value() const { return value_; }

 private:
  double value_;
};

// S(rho||sigma) = tr(rho ln rho) - tr(rho ln sigma), evaluated through
// spectra and eigenvector overlaps; +inf when supp(rho) is not contained in
// supp(sigma).
DivergenceValue quantum_relative_entropy(const DensityMatrix& rho,
                                         const DensityMatrix& sigma);

// D(P|Q) with the relative-entropy support convention: 0 ln 0 terms vanish,
// P_s > 0 over Q_s = 0 gives +inf.
DivergenceValue classical_kl_divergence(const ClassicalDistribution& p,
                                        const ClassicalDistribution& q);

// chi^2(P | (1-lambda) P + lambda Q); at lambda = 1 this is the plain chi^2
// (then Q_s = 0 < P_s gives +inf).
DivergenceValue classical_chi2_lambda(const ClassicalDistribution& p,
                                      const ClassicalDistribution& q,
                                      Lambda lambda);

// Spectral-sum route:
//   lambda^2 sum_ij (p_i - q_j)^2 / ((1-lambda) p_i + lambda q_j) |<p_i|q_j>|^2.
// Equals classical_chi2_lambda on the NS pair.
DivergenceValue quantum_chi2_lambda(const DensityMatrix& rho,
                                    const DensityMatrix& sigma, Lambda lambda);

// Same sum with the overlap matrix supplied directly; overlaps(i, j) plays
// the role of <p_i|q_j>. Lets callers with structured eigenbases (for example
// sigma = U rho U^dagger) skip the second diagonalization while keeping the
// cutoff conventions of quantum_chi2_lambda.
DivergenceValue chi2_lambda_from_overlaps(const RealVector& p,
                                          const RealVector& q,
                                          const ComplexMatrix& overlaps,
                                          Lambda lambda);

// delta(rho, sigma) = (1/2) sum_ij (p_i - q_j)^2 / (p_i + q_j) |<p_i|q_j>|^2,
// the lambda = 1/2 member of the chi^2_lambda family. Symmetric in its
// arguments.
DivergenceValue triangular_discrimination(const DensityMatrix& rho,
                                          const DensityMatrix& sigma);

// Operator characterization on the doubled space (dim <= 8):
//   chi^2_lambda = tr[(|Psi_rho><Psi_rho| - |Psi_sigma><Psi_sigma|) Omega_lambda]
// with Omega_lambda = lambda^2 [rho (x) I - I (x) sigma]
//                     [(1-lambda) rho (x) I + lambda I (x) sigma]^+.
// The pseudoinverse drops joint-kernel directions, so at lambda = 1 with
// rank-deficient sigma this stays finite where the spectral sum is +inf.
DivergenceValue chi2_lambda_operator_route(const DensityMatrix& rho,
                                           const DensityMatrix& sigma,
                                           Lambda lambda);

// D(P|Q) via the integral of chi^2_lambda / lambda over lambda in (0, 1],
// Gauss-Legendre after the substitution lambda = u^2, doubling nodes from
// n_quad until successive estimates agree to 1e-9. Throws DivergentIntegral
// when the direct KL is +inf.
double kl_integral_representation(const ClassicalDistribution& p,
                                  const ClassicalDistribution& q,
                                  int n_quad = 64);

// F_Q[rho, H] = 2 sum_ij (p_i - p_j)^2 / (p_i + p_j) |<p_i|H|p_j>|^2.
double quantum_fisher_information(const DensityMatrix& rho,
                                  const Observable& h);

}  // namespace qtur
