#pragma once

#include <complex>
#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "qtur/errors.hpp"

namespace qtur {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Numerical tolerances shared across the library. Values are part of the
// documented behavior; tests pin against them.
namespace tol {
inline constexpr double hermiticity = 1e-10;
inline constexpr double trace_one = 1e-10;
inline constexpr double unitarity = 1e-9;
inline constexpr double orthonormality = 1e-8;
// Eigenvalues in [-eig_clamp, 0) are treated as rounding noise and clamped
// to 0; anything more negative rejects the state.
inline constexpr double eig_clamp = 1e-10;
// Support membership: eigenvalues <= eig_zero count as zero directions.
inline constexpr double eig_zero = 1e-12;
// Squared eigenvector overlaps below this are exact zeros (drives the
// Theta_ij := 0 branch and support detection).
inline constexpr double overlap_cutoff = 1e-14;
// Sum terms whose denominator falls below this are dropped (pseudoinverse
// convention) or promoted to +inf when the numerator is genuinely nonzero.
inline constexpr double denom_cutoff = 1e-15;
// |mean difference| below this makes the closed-form bound return 0.
inline constexpr double a_cutoff = 1e-12;
}  // namespace tol

bool is_hermitian(const ComplexMatrix& m, double tolerance = tol::hermiticity);

// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues, columns
// of `vectors` are the matching orthonormal eigenvectors.
struct Spectrum {
  RealVector values;
  ComplexMatrix vectors;
};

// Throws NotHermitian when the symmetry tolerance is violated.
Spectrum spectral_decompose(const ComplexMatrix& m,
                            double tolerance = tol::hermiticity);

/// A d x d Hermitian, PSD, unit-trace state carrying its cached spectral
/// decomposition (ascending eigenvalues, rounding-level negatives clamped
/// to 0).
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m);

  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix diagonal(const RealVector& probs);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  const RealVector& eigenvalues() const { return spectrum_.values; }
  const ComplexMatrix& eigenvectors() const { return spectrum_.vectors; }

  double min_eigenvalue() const { return spectrum_.values(0); }
  bool full_rank(double cutoff = tol::eig_zero) const {
    return min_eigenvalue() > cutoff;
  }

 private:
  ComplexMatrix matrix_;
  Spectrum spectrum_;
};

/// A d x d Hermitian operator.
class Observable {
 public:
  explicit Observable(ComplexMatrix m);

  static Observable diagonal(const RealVector& values);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  ComplexMatrix matrix_;
};

/// A d x d unitary, ||U^dag U - I||_max <= 1e-9.
class Unitary {
 public:
  explicit Unitary(ComplexMatrix m);

  static Unitary identity(int dim);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  ComplexMatrix matrix_;
};

// <theta>_rho = tr(theta rho) (real for Hermitian theta).
double expectation(const Observable& theta, const DensityMatrix& rho);
// <(theta - <theta>)^2>_rho, clamped to >= 0.
double variance(const Observable& theta, const DensityMatrix& rho);

// Kronecker product; index convention is (left index major, right index
// minor), i.e. row a_i*rows(b)+b_i. Partial traces depend on this.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Subsystem { System, Environment };

// Traces out `traced` from a matrix on S (x) E with dims (dim_s, dim_e),
// S-major index convention. Returns the reduced matrix on the other factor.
ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_s, int dim_e,
                            Subsystem traced);

// U rho U^dag, revalidated as a DensityMatrix.
DensityMatrix evolve(const DensityMatrix& rho, const Unitary& u);

// Matrix logarithm of a strictly positive state; throws SingularState when
// the smallest eigenvalue is <= tol::eig_zero.
ComplexMatrix matrix_log_psd(const DensityMatrix& rho);
// Support-restricted variant: sum of ln(p_i) v_i v_i^dag over p_i above the
// support cutoff (for use inside relative-entropy-style expressions).
ComplexMatrix matrix_log_on_support(const DensityMatrix& rho,
                                    double cutoff = tol::eig_zero);

// Deterministic instance generators; identical seeds reproduce identical
// outputs bit for bit.
DensityMatrix random_density_matrix(int dim, int rank, std::uint64_t seed);
Observable random_observable(int dim, double scale, std::uint64_t seed);
Unitary random_unitary(int dim, std::uint64_t seed);

// Stateless seed mixer for deriving per-instance seeds from a campaign seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

}  // namespace qtur
