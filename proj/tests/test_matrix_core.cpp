#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "qtur/matrix_core.hpp"

using namespace qtur;

namespace {

const std::complex<double> I{0.0, 1.0};

ComplexMatrix qubit(double a, std::complex<double> c, double d) {
  ComplexMatrix m(2, 2);
  m << a, c, std::conj(c), d;
  return m;
}

}  // namespace

TEST_CASE("density matrix validation") {
  CHECK_NOTHROW(DensityMatrix(qubit(0.7, 0.1, 0.3)));

  ComplexMatrix bad = qubit(0.7, 0.1, 0.3);
  bad(0, 1) = 0.2;  // breaks Hermiticity against the conjugate entry
  bad(1, 0) = 0.1;
  CHECK_THROWS_AS(DensityMatrix{bad}, NotHermitian);

  CHECK_THROWS_AS(DensityMatrix(qubit(0.7, 0.0, 0.2)), InvalidState);  // trace

  // Eigenvalues slightly negative: clamped below 1e-10, rejected beyond.
  ComplexMatrix nearly = qubit(1.0 + 5e-11, 0.0, -5e-11);
  const DensityMatrix clamped(nearly);
  CHECK(clamped.min_eigenvalue() == 0.0);
  CHECK_THROWS_AS(DensityMatrix(qubit(1.0 + 1e-7, 0.0, -1e-7)), InvalidState);
}

TEST_CASE("pure and diagonal factories") {
  ComplexVector plus(2);
  plus << 1.0, 1.0;  // unnormalized on purpose
  const DensityMatrix rho = DensityMatrix::pure(plus);
  CHECK(rho.matrix()(0, 1).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rho.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rho.eigenvalues()(1) == doctest::Approx(1.0).epsilon(1e-12));

  RealVector p(3);
  p << 0.5, 0.3, 0.2;
  const DensityMatrix diag = DensityMatrix::diagonal(p);
  CHECK(diag.matrix()(0, 0).real() == doctest::Approx(0.5));
  CHECK(diag.eigenvalues()(0) == doctest::Approx(0.2));  // ascending
  CHECK(diag.full_rank());
}

TEST_CASE("spectral decomposition is ascending and reconstructs") {
  const ComplexMatrix m = qubit(0.3, 0.1 + 0.2 * I, 0.7);
  const Spectrum s = spectral_decompose(m);
  CHECK(s.values(0) <= s.values(1));
  ComplexMatrix rebuilt = ComplexMatrix::Zero(2, 2);
  for (int k = 0; k < 2; ++k) {
    rebuilt += s.values(k) * (s.vectors.col(k) * s.vectors.col(k).adjoint());
  }
  CHECK((rebuilt - m).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(spectral_decompose(pauli_y() * 2.0 + pauli_x() * I),
                  NotHermitian);
}

TEST_CASE("expectation and variance") {
  RealVector p(2);
  p << 0.8, 0.2;
  const DensityMatrix rho = DensityMatrix::diagonal(p);
  const Observable z{pauli_z()};
  CHECK(expectation(z, rho) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(variance(z, rho) == doctest::Approx(0.64).epsilon(1e-14));
  const Observable x{pauli_x()};
  CHECK(expectation(x, rho) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(variance(x, rho) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("tensor product and partial traces invert") {
  const DensityMatrix a(qubit(0.7, 0.1 * I, 0.3));
  RealVector pe(3);
  pe << 0.5, 0.3, 0.2;
  const DensityMatrix b = DensityMatrix::diagonal(pe);
  const ComplexMatrix joint = tensor_product(a.matrix(), b.matrix());
  CHECK(joint.rows() == 6);
  CHECK((partial_trace(joint, 2, 3, Subsystem::Environment) - a.matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-13);
  CHECK((partial_trace(joint, 2, 3, Subsystem::System) - b.matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-13);

  // Bell state: both marginals are maximally mixed.
  ComplexVector bell(4);
  bell << 1.0, 0.0, 0.0, 1.0;
  const DensityMatrix phi = DensityMatrix::pure(bell);
  const ComplexMatrix red =
      partial_trace(phi.matrix(), 2, 2, Subsystem::Environment);
  CHECK((red - 0.5 * ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-13);
}

TEST_CASE("evolution") {
  RealVector p(2);
  p << 0.8, 0.2;
  const DensityMatrix rho = DensityMatrix::diagonal(p);
  const DensityMatrix flipped = evolve(rho, Unitary(pauli_x()));
  CHECK(flipped.matrix()(0, 0).real() == doctest::Approx(0.2).epsilon(1e-14));
  CHECK_THROWS_AS(Unitary(qubit(1.0, 0.0, 0.5)), NotUnitary);
}

TEST_CASE("matrix logarithms") {
  RealVector half(2);
  half << 0.5, 0.5;
  const DensityMatrix mixed = DensityMatrix::diagonal(half);
  const ComplexMatrix lg = matrix_log_psd(mixed);
  CHECK((lg - std::log(0.5) * ComplexMatrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-13);

  ComplexVector e0(2);
  e0 << 1.0, 0.0;
  CHECK_THROWS_AS(matrix_log_psd(DensityMatrix::pure(e0)), SingularState);
  // Support-restricted log skips the kernel instead of throwing.
  const ComplexMatrix supp = matrix_log_on_support(DensityMatrix::pure(e0));
  CHECK(supp.cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("random generators are deterministic and well formed") {
  const DensityMatrix r1 = random_density_matrix(4, 4, 7);
  const DensityMatrix r2 = random_density_matrix(4, 4, 7);
  CHECK((r1.matrix() - r2.matrix()).cwiseAbs().maxCoeff() == 0.0);
  const DensityMatrix r3 = random_density_matrix(4, 4, 8);
  CHECK((r1.matrix() - r3.matrix()).cwiseAbs().maxCoeff() > 1e-3);
  CHECK(std::abs(r1.matrix().trace().real() - 1.0) < 1e-12);

  const DensityMatrix lowrank = random_density_matrix(4, 2, 11);
  CHECK(lowrank.eigenvalues()(0) < 1e-14);
  CHECK(lowrank.eigenvalues()(1) < 1e-14);
  CHECK(lowrank.eigenvalues()(2) > 1e-6);
  CHECK_THROWS_AS(random_density_matrix(3, 4, 1), InvalidRank);
  CHECK_THROWS_AS(random_density_matrix(3, 0, 1), InvalidRank);

  const Unitary u1 = random_unitary(5, 13);
  const Unitary u2 = random_unitary(5, 13);
  CHECK((u1.matrix() - u2.matrix()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((u1.matrix().adjoint() * u1.matrix() -
         ComplexMatrix::Identity(5, 5))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  const Observable o1 = random_observable(3, 2.0, 21);
  CHECK(is_hermitian(o1.matrix()));

  CHECK(mix_seed(1, 2) != mix_seed(1, 3));
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
  CHECK(mix_seed(1, 2) != mix_seed(2, 2));
}
