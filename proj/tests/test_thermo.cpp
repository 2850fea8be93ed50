#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qtur/divergences.hpp"
#include "qtur/matrix_core.hpp"
#include "qtur/thermo.hpp"

using namespace qtur;

namespace {

constexpr double kPi = 3.14159265358979323846;

ThermoSetup swap_setup(double angle, ResetProtocol protocol) {
  const Observable h{pauli_z()};
  return ThermoSetup(thermal_state(0.2, h), thermal_state(1.0, h),
                     partial_swap(2, angle), protocol);
}

}  // namespace

TEST_CASE("thermal states") {
  const Observable h{pauli_z()};
  const DensityMatrix hot = thermal_state(0.0, h);
  CHECK((hot.matrix() - 0.5 * ComplexMatrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  const DensityMatrix cold = thermal_state(0.2, h);
  CHECK(expectation(h, cold) ==
        doctest::Approx(-std::tanh(0.2)).epsilon(1e-13));
  CHECK(cold.matrix()(0, 0).real() ==
        doctest::Approx(0.40131233988754794).epsilon(1e-13));
  CHECK_THROWS_AS(thermal_state(-0.1, h), ConfigError);
}

TEST_CASE("partial swap endpoints") {
  const Unitary id = partial_swap(2, 0.0);
  CHECK((id.matrix() - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() ==
        0.0);
  const Unitary full = partial_swap(2, kPi / 2);
  // i SWAP: |0 1> maps to i |1 0> in the S-major layout.
  CHECK(std::abs(full.matrix()(2, 1) - std::complex<double>(0.0, 1.0)) <
        1e-14);
  CHECK(std::abs(full.matrix()(0, 0) - std::complex<double>(0.0, 1.0)) <
        1e-14);
  CHECK(std::abs(full.matrix()(1, 1)) < 1e-14);
}

TEST_CASE("hamiltonian evolution") {
  const Unitary u = hamiltonian_evolution(Observable{pauli_z()}, 0.7);
  CHECK(std::abs(u.matrix()(0, 0) - std::exp(std::complex<double>(0, -0.7))) <
        1e-13);
  CHECK(std::abs(u.matrix()(1, 1) - std::exp(std::complex<double>(0, 0.7))) <
        1e-13);
  CHECK(std::abs(u.matrix()(0, 1)) < 1e-14);
}

TEST_CASE("protocol names") {
  CHECK(protocol_from_string("bath_reset") == ResetProtocol::BathReset);
  CHECK(protocol_from_string("both_reset") == ResetProtocol::BothReset);
  CHECK(to_string(ResetProtocol::BathReset) == "bath_reset");
  CHECK(to_string(ResetProtocol::BothReset) == "both_reset");
  CHECK_THROWS_AS(protocol_from_string("reset"), ConfigError);
}

TEST_CASE("identity coupling produces no entropy") {
  const Observable h{pauli_z()};
  const ThermoSetup setup(thermal_state(0.2, h), thermal_state(1.0, h),
                          Unitary::identity(4), ResetProtocol::BathReset);
  CHECK(entropy_production(setup).value() ==
        doctest::Approx(0.0).epsilon(1e-12));

  // Local system rotation under bath reset: reference tracks the system, so
  // entropy production still vanishes.
  const Unitary local{tensor_product(random_unitary(2, 5).matrix(),
                                     ComplexMatrix::Identity(2, 2))};
  const ThermoSetup rotated(thermal_state(0.2, h), thermal_state(1.0, h),
                            local, ResetProtocol::BathReset);
  CHECK(std::fabs(entropy_production(rotated).value()) < 1e-9);
}

TEST_CASE("full swap under both reset gives symmetrized relative entropy") {
  const ThermoSetup setup = swap_setup(kPi / 2, ResetProtocol::BothReset);
  CHECK(entropy_production(setup).value() ==
        doctest::Approx(0.45137506858468857).epsilon(1e-9));
  // Forward environment marginal after a full swap is the system state.
  const ForwardStates states = forward_states(setup);
  CHECK((states.rho_E_t.matrix() - setup.rho_S.matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("flux tur at the pinned collision angle") {
  const ThermoSetup setup = swap_setup(0.3, ResetProtocol::BathReset);
  CHECK(entropy_production(setup).value() ==
        doctest::Approx(0.03814722227270566).epsilon(1e-9));

  const auto [flux, report] = entropy_flux_tur(setup);
  CHECK(flux.phi == doctest::Approx(0.0492744679996539).epsilon(1e-9));
  CHECK(flux.var_t == doctest::Approx(0.49260066215010856).epsilon(1e-9));
  CHECK(flux.var_0 == doctest::Approx(0.41997434161402586).epsilon(1e-9));
  CHECK(report.lower_bound ==
        doctest::Approx(0.0027346199224841106).epsilon(1e-9));
  CHECK(report.satisfied);
  CHECK(report.slack == doctest::Approx(0.03541260235022155).epsilon(1e-8));

  const ThermoSetup both = swap_setup(0.3, ResetProtocol::BothReset);
  CHECK(entropy_production(both).value() ==
        doctest::Approx(0.039419574399722906).epsilon(1e-9));
  // Same flux observable, same bound; only the reference state changes.
  const auto [flux_b, report_b] = entropy_flux_tur(both);
  CHECK(flux_b.phi == doctest::Approx(flux.phi).epsilon(1e-12));
  CHECK(report_b.lower_bound ==
        doctest::Approx(report.lower_bound).epsilon(1e-12));
  CHECK(report_b.satisfied);
}

TEST_CASE("flux tur needs a full-rank environment") {
  ComplexVector e0(2);
  e0 << 1.0, 0.0;
  const Observable h{pauli_z()};
  const ThermoSetup setup(thermal_state(0.2, h), DensityMatrix::pure(e0),
                          partial_swap(2, 0.3), ResetProtocol::BathReset);
  CHECK_THROWS_AS(entropy_flux_tur(setup), SingularEnvironment);
}

TEST_CASE("unitary chi2 matches the generic spectral route") {
  const DensityMatrix rho = random_density_matrix(3, 3, 71);
  const Unitary u = random_unitary(3, 72);
  const DensityMatrix sigma = evolve(rho, u);
  for (double l : {0.2, 0.5, 1.0}) {
    CHECK(unitary_chi2(rho, u, Lambda(l)).value() ==
          doctest::Approx(quantum_chi2_lambda(rho, sigma, Lambda(l)).value())
              .epsilon(1e-10));
  }
}

TEST_CASE("qfi expansion on the pinned qubit") {
  RealVector p(2);
  p << 0.8, 0.2;
  const DensityMatrix rho = DensityMatrix::diagonal(p);
  const std::vector<double> taus = {0.01, 0.02, 0.04, 0.08};
  const QfiExpansionReport rep =
      qfi_expansion_check(rho, Observable{pauli_y()}, taus);
  CHECK(rep.qfi == doctest::Approx(1.44).epsilon(1e-12));
  CHECK_FALSE(rep.trivial);
  CHECK(rep.satisfied);
  CHECK(rep.slope >= 3.5);
  CHECK(rep.slope <= 4.5);
  // Quartic remainder: halving tau divides the residual by about 16.
  REQUIRE(rep.residuals.size() == 4);
  const double ratio = rep.residuals[1] / rep.residuals[0];
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
  // delta itself is quadratic to leading order.
  CHECK(rep.deltas[0] ==
        doctest::Approx(0.36 * 0.01 * 0.01).epsilon(1e-3));

  // Commuting Hamiltonian: trivial branch.
  const QfiExpansionReport flat =
      qfi_expansion_check(rho, Observable{pauli_z()}, taus);
  CHECK(flat.trivial);
  CHECK(flat.satisfied);

  ComplexVector e0(2);
  e0 << 1.0, 0.0;
  CHECK_THROWS_AS(qfi_expansion_check(DensityMatrix::pure(e0),
                                      Observable{pauli_y()}, taus),
                  SingularState);
}

TEST_CASE("cramer-rao limit on the pinned qubit") {
  RealVector p(2);
  p << 0.8, 0.2;
  const DensityMatrix rho = DensityMatrix::diagonal(p);
  const std::vector<double> taus = {0.1, 0.05, 0.025, 0.0125};
  const CrLimitReport rep = cramer_rao_limit_check(
      rho, Observable{pauli_y()}, Observable{pauli_x()}, taus);
  CHECK(rep.qfi == doctest::Approx(1.44).epsilon(1e-12));
  CHECK(rep.rhs == doctest::Approx(2.7777777777777777).epsilon(1e-12));
  CHECK(rep.derivative_oracle == doctest::Approx(1.2).epsilon(1e-12));
  REQUIRE(rep.taus.size() == 4);
  CHECK(rep.taus.front() == 0.1);  // sorted descending
  CHECK(rep.lhs.front() ==
        doctest::Approx(2.8151130029474167).epsilon(1e-10));
  CHECK(rep.fd_derivatives.front() ==
        doctest::Approx(1.192015984770367).epsilon(1e-10));
  CHECK(rep.inequality_ok);
  CHECK(rep.limit_ok);
  CHECK(rep.satisfied);
  CHECK(rep.extrapolated_lhs == doctest::Approx(rep.rhs).epsilon(1e-6));

  // theta = Z has zero initial rate under H = Y at a diagonal state.
  CHECK_THROWS_AS(cramer_rao_limit_check(rho, Observable{pauli_y()},
                                         Observable{pauli_z()}, taus),
                  DegenerateDerivative);
}
