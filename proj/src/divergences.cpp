#include "qtur/divergences.hpp"

#include <cmath>
#include <sstream>

#include "qtur/quadrature.hpp"

namespace qtur {

namespace {

// Squared numerators below this are rounding noise; above it, a vanishing
// denominator means a genuine support violation (+inf).
constexpr double kNumeratorNoise = 1e-24;

void require_equal_dims(const DensityMatrix& rho, const DensityMatrix& sigma,
                        const char* what) {
  if (rho.dim() != sigma.dim()) {
    std::ostringstream os;
    os << what << ": state dims differ (" << rho.dim() << " vs "
       << sigma.dim() << ")";
    throw DimensionMismatch(os.str());
  }
}

}  // namespace

DivergenceValue DivergenceValue::finite(double v) {
  if (!std::isfinite(v)) {
    throw InvalidState("DivergenceValue::finite: non-finite value");
  }
  if (v < -1e-10) {
    std::ostringstream os;
    os << "DivergenceValue: negative divergence " << v;
    throw InvalidState(os.str());
  }
  return DivergenceValue(v, true);
}

DivergenceValue DivergenceValue::infinity() {
  return DivergenceValue(0.0, false);
}

Lambda::Lambda(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    std::ostringstream os;
    os << "Lambda: " << value << " outside [0, 1]";
    throw Error(os.str());
  }
}

DivergenceValue quantum_relative_entropy(const DensityMatrix& rho,
                                         const DensityMatrix& sigma) {
  require_equal_dims(rho, sigma, "quantum_relative_entropy");
  const int n = rho.dim();
  const ComplexMatrix overlaps =
      rho.eigenvectors().adjoint() * sigma.eigenvectors();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double p = rho.eigenvalues()(i);
    if (p <= tol::denom_cutoff) continue;
    for (int j = 0; j < n; ++j) {
      const double w = std::norm(overlaps(i, j));
      if (w < tol::overlap_cutoff) continue;
      const double q = sigma.eigenvalues()(j);
      if (q <= tol::denom_cutoff) {
        if (p > tol::eig_zero) return DivergenceValue::infinity();
        continue;  // noise-level weight on a kernel direction
      }
      sum += p * w * (std::log(p) - std::log(q));
    }
  }
  if (sum < 0.0 && sum > -1e-10) sum = 0.0;
  return DivergenceValue::finite(sum);
}

DivergenceValue classical_kl_divergence(const ClassicalDistribution& p,
                                        const ClassicalDistribution& q) {
  if (p.support_size() != q.support_size()) {
    throw DimensionMismatch("classical_kl_divergence: supports differ");
  }
  double sum = 0.0;
  for (int s = 0; s < p.support_size(); ++s) {
    if (p[s] <= tol::denom_cutoff) continue;
    if (q[s] <= tol::denom_cutoff) return DivergenceValue::infinity();
    sum += p[s] * std::log(p[s] / q[s]);
  }
  if (sum < 0.0 && sum > -1e-10) sum = 0.0;
  return DivergenceValue::finite(sum);
}

DivergenceValue classical_chi2_lambda(const ClassicalDistribution& p,
                                      const ClassicalDistribution& q,
                                      Lambda lambda) {
  if (p.support_size() != q.support_size()) {
    throw DimensionMismatch("classical_chi2_lambda: supports differ");
  }
  const double lam = lambda.value();
  if (lam == 0.0) return DivergenceValue::finite(0.0);
  double sum = 0.0;
  for (int s = 0; s < p.support_size(); ++s) {
    const double diff2 = (p[s] - q[s]) * (p[s] - q[s]);
    const double denom = (1.0 - lam) * p[s] + lam * q[s];
    if (denom < tol::denom_cutoff) {
      if (diff2 > kNumeratorNoise) return DivergenceValue::infinity();
      continue;
    }
    sum += lam * lam * diff2 / denom;
  }
  return DivergenceValue::finite(sum);
}

DivergenceValue chi2_lambda_from_overlaps(const RealVector& p,
                                          const RealVector& q,
                                          const ComplexMatrix& overlaps,
                                          Lambda lambda) {
  const int n = static_cast<int>(p.size());
  if (q.size() != n || overlaps.rows() != n || overlaps.cols() != n) {
    throw DimensionMismatch("chi2_lambda_from_overlaps: shape mismatch");
  }
  const double lam = lambda.value();
  if (lam == 0.0) return DivergenceValue::finite(0.0);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double w = std::norm(overlaps(i, j));
      if (w < tol::overlap_cutoff) continue;
      const double diff2 = (p(i) - q(j)) * (p(i) - q(j));
      const double denom = (1.0 - lam) * p(i) + lam * q(j);
      if (denom < tol::denom_cutoff) {
        if (diff2 * w > kNumeratorNoise) return DivergenceValue::infinity();
        continue;
      }
      sum += lam * lam * diff2 * w / denom;
    }
  }
  return DivergenceValue::finite(sum);
}

DivergenceValue quantum_chi2_lambda(const DensityMatrix& rho,
                                    const DensityMatrix& sigma,
                                    Lambda lambda) {
  require_equal_dims(rho, sigma, "quantum_chi2_lambda");
  const ComplexMatrix overlaps =
      rho.eigenvectors().adjoint() * sigma.eigenvectors();
  return chi2_lambda_from_overlaps(rho.eigenvalues(), sigma.eigenvalues(),
                                   overlaps, lambda);
}

DivergenceValue triangular_discrimination(const DensityMatrix& rho,
                                          const DensityMatrix& sigma) {
  require_equal_dims(rho, sigma, "triangular_discrimination");
  const int n = rho.dim();
  const ComplexMatrix overlaps =
      rho.eigenvectors().adjoint() * sigma.eigenvectors();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double p = rho.eigenvalues()(i);
    for (int j = 0; j < n; ++j) {
      const double w = std::norm(overlaps(i, j));
      if (w < tol::overlap_cutoff) continue;
      const double q = sigma.eigenvalues()(j);
      if (p + q < tol::denom_cutoff) continue;
      sum += (p - q) * (p - q) / (p + q) * w;
    }
  }
  return DivergenceValue::finite(0.5 * sum);
}

DivergenceValue chi2_lambda_operator_route(const DensityMatrix& rho,
                                           const DensityMatrix& sigma,
                                           Lambda lambda) {
  require_equal_dims(rho, sigma, "chi2_lambda_operator_route");
  const int n = rho.dim();
  if (n > 8) {
    throw DimensionMismatch(
        "chi2_lambda_operator_route: dim^2 construction limited to dim <= 8");
  }
  const double lam = lambda.value();
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  const ComplexMatrix rho_left = tensor_product(rho.matrix(), eye);
  const ComplexMatrix sigma_right = tensor_product(eye, sigma.matrix());
  const ComplexMatrix numerator = rho_left - sigma_right;
  const ComplexMatrix denominator =
      (1.0 - lam) * rho_left + lam * sigma_right;

  // Moore-Penrose pseudoinverse of the Hermitian PSD denominator.
  const Spectrum spec = spectral_decompose(denominator);
  const int nn = n * n;
  ComplexMatrix pinv = ComplexMatrix::Zero(nn, nn);
  for (int k = 0; k < nn; ++k) {
    const double d = spec.values(k);
    if (std::abs(d) <= 1e-13) continue;
    const ComplexVector v = spec.vectors.col(k);
    pinv += (1.0 / d) * (v * v.adjoint());
  }
  const ComplexMatrix omega = (lam * lam) * numerator * pinv;

  ComplexVector psi_rho = ComplexVector::Zero(nn);
  ComplexVector psi_sigma = ComplexVector::Zero(nn);
  for (int i = 0; i < n; ++i) {
    const double p = rho.eigenvalues()(i);
    if (p > 0.0) {
      const ComplexVector v = rho.eigenvectors().col(i);
      ComplexVector vv(nn);
      for (int a = 0; a < n; ++a) vv.segment(a * n, n) = v(a) * v;
      psi_rho += std::sqrt(p) * vv;
    }
    const double q = sigma.eigenvalues()(i);
    if (q > 0.0) {
      const ComplexVector w = sigma.eigenvectors().col(i);
      ComplexVector ww(nn);
      for (int a = 0; a < n; ++a) ww.segment(a * n, n) = w(a) * w;
      psi_sigma += std::sqrt(q) * ww;
    }
  }
  const double value = (psi_rho.adjoint() * omega * psi_rho -
                        psi_sigma.adjoint() * omega * psi_sigma)
                           .value()
                           .real();
  return DivergenceValue::finite(value < 0.0 && value > -1e-10 ? 0.0 : value);
}

double kl_integral_representation(const ClassicalDistribution& p,
                                  const ClassicalDistribution& q,
                                  int n_quad) {
  if (p.support_size() != q.support_size()) {
    throw DimensionMismatch("kl_integral_representation: supports differ");
  }
  for (int s = 0; s < p.support_size(); ++s) {
    if (p[s] > tol::eig_zero && q[s] <= tol::denom_cutoff) {
      throw DivergentIntegral(
          "kl_integral_representation: direct KL is +inf (support violation)");
    }
  }
  const auto chi2 = [&](double lam) {
    double sum = 0.0;
    for (int s = 0; s < p.support_size(); ++s) {
      const double denom = (1.0 - lam) * p[s] + lam * q[s];
      if (denom < tol::denom_cutoff) continue;
      const double diff = p[s] - q[s];
      sum += lam * lam * diff * diff / denom;
    }
    return sum;
  };
  // lambda = u^2 softens the 1/lambda weight; the integrand is then
  // 2 chi^2_{u^2} / u, which vanishes at u = 0 since chi^2_lambda = O(lambda^2).
  return integrate_01_adaptive(
      [&](double u) { return u > 0.0 ? 2.0 * chi2(u * u) / u : 0.0; }, 1e-9,
      n_quad);
}

double quantum_fisher_information(const DensityMatrix& rho,
                                  const Observable& h) {
  if (rho.dim() != h.dim()) {
    throw DimensionMismatch("quantum_fisher_information: dims differ");
  }
  const int n = rho.dim();
  const ComplexMatrix h_elems =
      rho.eigenvectors().adjoint() * h.matrix() * rho.eigenvectors();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double pi = rho.eigenvalues()(i);
    for (int j = 0; j < n; ++j) {
      const double pj = rho.eigenvalues()(j);
      if (pi + pj < tol::denom_cutoff) continue;
      const double diff = pi - pj;
      sum += diff * diff / (pi + pj) * std::norm(h_elems(i, j));
    }
  }
  return 2.0 * sum;
}

}  // namespace qtur
