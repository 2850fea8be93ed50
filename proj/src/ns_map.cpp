#include "qtur/ns_map.hpp"

#include <cmath>
#include <sstream>

namespace qtur {

namespace {

void require_equal_dims(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    std::ostringstream os;
    os << "ns_map: state dims differ (" << rho.dim() << " vs " << sigma.dim()
       << ")";
    throw DimensionMismatch(os.str());
  }
}

}  // namespace

ClassicalDistribution::ClassicalDistribution(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw InvalidState("ClassicalDistribution: empty support");
  }
  double sum = 0.0;
  for (double& w : weights_) {
    if (!std::isfinite(w) || w < -1e-12) {
      throw InvalidState("ClassicalDistribution: negative or non-finite weight");
    }
    if (w < 0.0) w = 0.0;
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "ClassicalDistribution: weights sum to " << sum;
    throw InvalidState(os.str());
  }
}

ComplexMoments complex_moments(const ClassicalDistribution& dist,
                               const ComplexRandomVariable& variable) {
  if (dist.support_size() != variable.support_size()) {
    throw DimensionMismatch("complex_moments: support sizes differ");
  }
  std::complex<double> mean(0.0, 0.0);
  for (int s = 0; s < dist.support_size(); ++s) {
    mean += dist[s] * variable.values[s];
  }
  double var = 0.0;
  for (int s = 0; s < dist.support_size(); ++s) {
    var += dist[s] * std::norm(variable.values[s] - mean);
  }
  return ComplexMoments{mean, var};
}

std::pair<ClassicalDistribution, ClassicalDistribution> ns_distributions(
    const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_equal_dims(rho, sigma);
  const int n = rho.dim();
  const ComplexMatrix overlaps =
      rho.eigenvectors().adjoint() * sigma.eigenvectors();
  std::vector<double> p(n * n), q(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double w = std::norm(overlaps(i, j));
      p[i * n + j] = rho.eigenvalues()(i) * w;
      q[i * n + j] = sigma.eigenvalues()(j) * w;
    }
  }
  return {ClassicalDistribution(std::move(p)),
          ClassicalDistribution(std::move(q))};
}

ComplexRandomVariable ns_theta(const DensityMatrix& rho,
                               const DensityMatrix& sigma,
                               const Observable& theta_hat) {
  require_equal_dims(rho, sigma);
  if (theta_hat.dim() != rho.dim()) {
    throw DimensionMismatch("ns_theta: observable dim differs from states");
  }
  const int n = rho.dim();
  const ComplexMatrix overlaps =
      rho.eigenvectors().adjoint() * sigma.eigenvectors();
  const ComplexMatrix theta_elems =
      rho.eigenvectors().adjoint() * theta_hat.matrix() * sigma.eigenvectors();
  ComplexRandomVariable theta;
  theta.values.assign(n * n, std::complex<double>(0.0, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (std::norm(overlaps(i, j)) < tol::overlap_cutoff) continue;
      theta.values[i * n + j] = theta_elems(i, j) / overlaps(i, j);
    }
  }
  return theta;
}

NSPair ns_pair(const DensityMatrix& rho, const DensityMatrix& sigma,
               const Observable& theta_hat) {
  auto [p, q] = ns_distributions(rho, sigma);
  return NSPair{rho.dim(), std::move(p), std::move(q),
                ns_theta(rho, sigma, theta_hat)};
}

nlohmann::json NSPair::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const int s = flat_index(i, j);
      entries.push_back({{"i", i},
                         {"j", j},
                         {"p", p_dist[s]},
                         {"q", q_dist[s]},
                         {"theta", {theta.values[s].real(),
                                    theta.values[s].imag()}}});
    }
  }
  return nlohmann::json{{"dim", dim},
                        {"index_layout", "i*n+j"},
                        {"entries", std::move(entries)}};
}

VarianceDominationReport variance_domination_check(
    const NSPair& pair, const DensityMatrix& rho, const DensityMatrix& sigma,
    const Observable& theta_hat) {
  const ComplexMoments mp = complex_moments(pair.p_dist, pair.theta);
  const ComplexMoments mq = complex_moments(pair.q_dist, pair.theta);
  VarianceDominationReport report;
  report.classical_var_p = mp.variance;
  report.classical_var_q = mq.variance;
  report.quantum_var_rho = variance(theta_hat, rho);
  report.quantum_var_sigma = variance(theta_hat, sigma);
  report.margin_p = report.quantum_var_rho - report.classical_var_p;
  report.margin_q = report.quantum_var_sigma - report.classical_var_q;
  return report;
}

}  // namespace qtur
