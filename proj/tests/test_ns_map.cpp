#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qtur/divergences.hpp"
#include "qtur/matrix_core.hpp"
#include "qtur/ns_map.hpp"

using namespace qtur;

TEST_CASE("classical distribution validation") {
  CHECK_NOTHROW(ClassicalDistribution({0.5, 0.5}));
  CHECK_THROWS_AS(ClassicalDistribution({}), InvalidState);
  CHECK_THROWS_AS(ClassicalDistribution({0.5, 0.4}), InvalidState);
  CHECK_THROWS_AS(ClassicalDistribution({1.1, -0.1}), InvalidState);
  // Rounding-level negatives are clamped to zero.
  const ClassicalDistribution d({1.0 + 1e-13, -1e-13});
  CHECK(d[1] == 0.0);
}

TEST_CASE("complex moments") {
  const ClassicalDistribution d({0.25, 0.75});
  ComplexRandomVariable v;
  v.values = {{1.0, 0.0}, {0.0, 1.0}};
  const ComplexMoments m = complex_moments(d, v);
  CHECK(m.mean.real() == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(m.mean.imag() == doctest::Approx(0.75).epsilon(1e-14));
  // <|v|^2> - |<v>|^2 = 1 - (1/16 + 9/16) = 3/8.
  CHECK(m.variance == doctest::Approx(0.375).epsilon(1e-13));
}

TEST_CASE("commuting pair reduces to the classical distributions") {
  // Both spectra ascend onto the same basis order: index 0 sits on e_1.
  RealVector p(2), q(2);
  p << 0.8, 0.2;
  q << 0.6, 0.4;
  const DensityMatrix rho = DensityMatrix::diagonal(p);
  const DensityMatrix sigma = DensityMatrix::diagonal(q);
  const NSPair pair = ns_pair(rho, sigma, Observable{pauli_z()});

  // Overlaps are Kronecker deltas, so P has p on the diagonal pairs only.
  double off_mass = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (i != j) off_mass += pair.p_dist[pair.flat_index(i, j)];
    }
  }
  CHECK(off_mass < 1e-14);
  // Eigenvalues come back ascending, so locate masses by value.
  std::vector<double> pd = {pair.p_dist[pair.flat_index(0, 0)],
                            pair.p_dist[pair.flat_index(1, 1)]};
  std::sort(pd.begin(), pd.end());
  CHECK(pd[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(pd[1] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(pair.q_dist[pair.flat_index(0, 0)] ==
        doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("ns identities on a random full-rank triple") {
  const DensityMatrix rho = random_density_matrix(4, 4, 301);
  const DensityMatrix sigma = random_density_matrix(4, 4, 302);
  const Observable theta = random_observable(4, 1.0, 303);
  const NSPair pair = ns_pair(rho, sigma, theta);

  // Marginals normalize by construction.
  double psum = 0.0, qsum = 0.0;
  for (int s = 0; s < pair.p_dist.support_size(); ++s) {
    psum += pair.p_dist[s];
    qsum += pair.q_dist[s];
  }
  CHECK(psum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(qsum == doctest::Approx(1.0).epsilon(1e-12));

  // <Theta>_P = tr(theta rho).
  const ComplexMoments mp = complex_moments(pair.p_dist, pair.theta);
  CHECK(mp.mean.real() ==
        doctest::Approx(expectation(theta, rho)).epsilon(1e-10));
  CHECK(std::abs(mp.mean.imag()) < 1e-10);
  const ComplexMoments mq = complex_moments(pair.q_dist, pair.theta);
  CHECK(mq.mean.real() ==
        doctest::Approx(expectation(theta, sigma)).epsilon(1e-10));

  // D(P||Q) = S(rho||sigma) for the embedding.
  const double kl_cl =
      classical_kl_divergence(pair.p_dist, pair.q_dist).value();
  const double kl_q = quantum_relative_entropy(rho, sigma).value();
  CHECK(kl_cl == doctest::Approx(kl_q).epsilon(1e-9));

  // Classical variances never exceed the quantum ones.
  const VarianceDominationReport rep =
      variance_domination_check(pair, rho, sigma, theta);
  CHECK(rep.margin_p >= -1e-9);
  CHECK(rep.margin_q >= -1e-9);
  CHECK(rep.quantum_var_rho ==
        doctest::Approx(variance(theta, rho)).epsilon(1e-12));
}

TEST_CASE("theta vanishes on orthogonal overlap pairs") {
  // rho, sigma diagonal: overlap matrix is the identity pattern, so all
  // off-diagonal (i, j) get Theta_ij = 0 regardless of theta entries.
  RealVector p(2), q(2);
  p << 0.7, 0.3;
  q << 0.4, 0.6;
  const NSPair pair = ns_pair(DensityMatrix::diagonal(p),
                              DensityMatrix::diagonal(q),
                              Observable{pauli_x()});
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (i != j) {
        CHECK(std::abs(pair.theta.values[pair.flat_index(i, j)]) == 0.0);
      }
    }
  }
}

TEST_CASE("pair json shape") {
  RealVector p(2);
  p << 0.6, 0.4;
  const DensityMatrix rho = DensityMatrix::diagonal(p);
  const NSPair pair = ns_pair(rho, rho, Observable{pauli_z()});
  const nlohmann::json j = pair.to_json();
  CHECK(j.at("dim") == 2);
  CHECK(j.at("index_layout") == "i*n+j");
  CHECK(j.at("entries").size() == 4);
  CHECK(j.at("entries")[0].at("theta").size() == 2);
}
