#include "qtur/matrix_core.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace qtur {

namespace {

double max_abs(const ComplexMatrix& m) {
  return m.cwiseAbs().maxCoeff();
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidState(std::string(what) + ": matrix has NaN/Inf entries");
  }
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected nonempty square matrix, got " << m.rows() << "x"
       << m.cols();
    throw DimensionMismatch(os.str());
  }
}

}  // namespace

bool is_hermitian(const ComplexMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tolerance;
}

Spectrum spectral_decompose(const ComplexMatrix& m, double tolerance) {
  require_square(m, "spectral_decompose");
  require_finite(m, "spectral_decompose");
  if (!is_hermitian(m, tolerance)) {
    std::ostringstream os;
    os << "spectral_decompose: matrix is not Hermitian within " << tolerance
       << " (asymmetry " << max_abs(m - m.adjoint()) << ")";
    throw NotHermitian(os.str());
  }
  // Symmetrize before solving so the result is exactly self-adjoint.
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error("spectral_decompose: eigensolver failed to converge");
  }
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {
  require_square(matrix_, "DensityMatrix");
  require_finite(matrix_, "DensityMatrix");
  if (!is_hermitian(matrix_, tol::hermiticity)) {
    throw NotHermitian("DensityMatrix: not Hermitian within 1e-10");
  }
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > tol::trace_one) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr << " not within 1e-10 of 1";
    throw InvalidState(os.str());
  }
  spectrum_ = spectral_decompose(matrix_);
  for (Eigen::Index i = 0; i < spectrum_.values.size(); ++i) {
    double& p = spectrum_.values(i);
    if (p < -tol::eig_clamp) {
      std::ostringstream os;
      os << "DensityMatrix: eigenvalue " << p << " below -1e-10";
      throw InvalidState(os.str());
    }
    if (p < 0.0) p = 0.0;
  }
  const ComplexMatrix gram =
      spectrum_.vectors.adjoint() * spectrum_.vectors;
  if (max_abs(gram - ComplexMatrix::Identity(dim(), dim())) >
      tol::orthonormality) {
    throw InvalidState("DensityMatrix: eigenvectors not orthonormal");
  }
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw InvalidState("DensityMatrix::pure: zero vector");
  ComplexVector v = psi / n;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::diagonal(const RealVector& probs) {
  ComplexMatrix m = ComplexMatrix::Zero(probs.size(), probs.size());
  for (Eigen::Index i = 0; i < probs.size(); ++i) m(i, i) = probs(i);
  return DensityMatrix(std::move(m));
}

Observable::Observable(ComplexMatrix m) : matrix_(std::move(m)) {
  require_square(matrix_, "Observable");
  require_finite(matrix_, "Observable");
  if (!is_hermitian(matrix_, tol::hermiticity)) {
    throw NotHermitian("Observable: not Hermitian within 1e-10");
  }
}

Observable Observable::diagonal(const RealVector& values) {
  ComplexMatrix m = ComplexMatrix::Zero(values.size(), values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) m(i, i) = values(i);
  return Observable(std::move(m));
}

Unitary::Unitary(ComplexMatrix m) : matrix_(std::move(m)) {
  require_square(matrix_, "Unitary");
  require_finite(matrix_, "Unitary");
  const ComplexMatrix gram = matrix_.adjoint() * matrix_;
  const double defect =
      max_abs(gram - ComplexMatrix::Identity(dim(), dim()));
  if (defect > tol::unitarity) {
    std::ostringstream os;
    os << "Unitary: ||U^dag U - I||_max = " << defect << " exceeds 1e-9";
    throw NotUnitary(os.str());
  }
}

Unitary Unitary::identity(int dim) {
  return Unitary(ComplexMatrix::Identity(dim, dim));
}

double expectation(const Observable& theta, const DensityMatrix& rho) {
  if (theta.dim() != rho.dim()) {
    throw DimensionMismatch("expectation: observable/state dims differ");
  }
  return (theta.matrix() * rho.matrix()).trace().real();
}

double variance(const Observable& theta, const DensityMatrix& rho) {
  const double mean = expectation(theta, rho);
  const double second =
      (theta.matrix() * theta.matrix() * rho.matrix()).trace().real();
  double var = second - mean * mean;
  if (var < 0.0) var = 0.0;
  return var;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_s, int dim_e,
                            Subsystem traced) {
  require_square(m, "partial_trace");
  if (m.rows() != static_cast<Eigen::Index>(dim_s) * dim_e) {
    std::ostringstream os;
    os << "partial_trace: matrix dim " << m.rows() << " != " << dim_s << "*"
       << dim_e;
    throw DimensionMismatch(os.str());
  }
  if (traced == Subsystem::Environment) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_s, dim_s);
    for (int i = 0; i < dim_s; ++i)
      for (int j = 0; j < dim_s; ++j)
        for (int k = 0; k < dim_e; ++k)
          out(i, j) += m(i * dim_e + k, j * dim_e + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_e, dim_e);
  for (int i = 0; i < dim_e; ++i)
    for (int j = 0; j < dim_e; ++j)
      for (int k = 0; k < dim_s; ++k)
        out(i, j) += m(k * dim_e + i, k * dim_e + j);
  return out;
}

DensityMatrix evolve(const DensityMatrix& rho, const Unitary& u) {
  if (rho.dim() != u.dim()) {
    throw DimensionMismatch("evolve: state/unitary dims differ");
  }
  return DensityMatrix(u.matrix() * rho.matrix() * u.matrix().adjoint());
}

ComplexMatrix matrix_log_psd(const DensityMatrix& rho) {
  if (!rho.full_rank()) {
    std::ostringstream os;
    os << "matrix_log_psd: state is rank-deficient (min eigenvalue "
       << rho.min_eigenvalue() << ")";
    throw SingularState(os.str());
  }
  return matrix_log_on_support(rho);
}

ComplexMatrix matrix_log_on_support(const DensityMatrix& rho, double cutoff) {
  const int d = rho.dim();
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double p = rho.eigenvalues()(i);
    if (p <= cutoff) continue;
    const ComplexVector v = rho.eigenvectors().col(i);
    out += std::log(p) * (v * v.adjoint());
  }
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

ComplexMatrix gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = std::complex<double>(re, im);
    }
  }
  return g;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

DensityMatrix random_density_matrix(int dim, int rank, std::uint64_t seed) {
  if (rank < 1 || rank > dim) {
    std::ostringstream os;
    os << "random_density_matrix: rank " << rank << " outside [1, " << dim
       << "]";
    throw InvalidRank(os.str());
  }
  std::mt19937_64 rng(seed);
  const ComplexMatrix g = gaussian_matrix(dim, rank, rng);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(std::move(m));
}

Observable random_observable(int dim, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const ComplexMatrix g = gaussian_matrix(dim, dim, rng);
  return Observable(scale * 0.5 * (g + g.adjoint()));
}

Unitary random_unitary(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const ComplexMatrix g = gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the distribution is Haar and the output is a
  // deterministic function of the seed.
  for (int j = 0; j < dim; ++j) {
    const std::complex<double> d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0) ? d / a : 1.0;
  }
  return Unitary(std::move(q));
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << std::complex<double>(0, 0), std::complex<double>(0, -1),
      std::complex<double>(0, 1), std::complex<double>(0, 0);
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace qtur
