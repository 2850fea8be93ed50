#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qtur/matrix_core.hpp"

namespace qtur {

/// Nonnegative weights summing to 1 within 1e-10.
class ClassicalDistribution {
 public:
  explicit ClassicalDistribution(std::vector<double> weights);

  int support_size() const { return static_cast<int>(weights_.size()); }
  double operator[](int s) const { return weights_[s]; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

struct ComplexRandomVariable {
  std::vector<std::complex<double>> values;

  int support_size() const { return static_cast<int>(values.size()); }
};

struct ComplexMoments {
  std::complex<double> mean;
  double variance;  // <|Theta - <Theta>|^2>
};

ComplexMoments complex_moments(const ClassicalDistribution& dist,
                               const ComplexRandomVariable& variable);

// The classical embedding of (rho, sigma, theta_hat): distributions P, Q on
// index pairs (i, j) flattened as i*n + j, plus the complex variable Theta
// with Theta_ij = <p_i|theta|q_j>/<p_i|q_j> (0 where the squared overlap is
// below tol::overlap_cutoff).
struct NSPair {
  int dim;  // n; all members have support size n^2
  ClassicalDistribution p_dist;
  ClassicalDistribution q_dist;
  ComplexRandomVariable theta;

  int flat_index(int i, int j) const { return i * dim + j; }

  nlohmann::json to_json() const;
};

std::pair<ClassicalDistribution, ClassicalDistribution> ns_distributions(
    const DensityMatrix& rho, const DensityMatrix& sigma);

ComplexRandomVariable ns_theta(const DensityMatrix& rho,
                               const DensityMatrix& sigma,
                               const Observable& theta_hat);

NSPair ns_pair(const DensityMatrix& rho, const DensityMatrix& sigma,
               const Observable& theta_hat);

struct VarianceDominationReport {
  double classical_var_p;  // <<Theta>>_P
  double classical_var_q;  // <<Theta>>_Q
  double quantum_var_rho;
  double quantum_var_sigma;
  double margin_p;  // quantum - classical, should be >= -1e-9
  double margin_q;
};

VarianceDominationReport variance_domination_check(const NSPair& pair,
                                                  const DensityMatrix& rho,
                                                  const DensityMatrix& sigma,
                                                  const Observable& theta_hat);

}  // namespace qtur
