#pragma once

#include <vector>

#include <json.hpp>

#include "qtur/bounds.hpp"
#include "qtur/divergences.hpp"
#include "qtur/ns_map.hpp"

namespace qtur {

// Forward/backward trajectory distributions over abstract indices, the
// conjugation involution pi (pi(pi(g)) = g), and an observable theta(g).
struct TrajectoryEnsemble {
  ClassicalDistribution forward;
  ClassicalDistribution backward;
  std::vector<int> involution;
  std::vector<double> observable;

  TrajectoryEnsemble(ClassicalDistribution fwd, ClassicalDistribution bwd,
                     std::vector<int> pi, std::vector<double> theta);

  int n_traj() const { return forward.support_size(); }

  static TrajectoryEnsemble from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// <Sigma_cl> = sum_G P_F(G) ln(P_F(G) / P_B(pi(G))); +inf on support
// violation, otherwise >= 0.
DivergenceValue classical_entropy_production(const TrajectoryEnsemble& ens);

// <Sigma_cl> >= F(<theta>_p - <theta>_q, <<theta>>_p, <<theta>>_q) with
// p = P_F and q the pushforward of P_B through pi.
BoundReport classical_tur_check(const TrajectoryEnsemble& ens,
                                double tolerance = 1e-9);

struct ReductionReport {
  DivergenceValue kl_quantum;
  DivergenceValue kl_classical;
  DivergenceValue kl_ns;              // D(P|Q) of the NS pair
  std::vector<double> lambdas;
  std::vector<DivergenceValue> chi2_quantum;
  std::vector<DivergenceValue> chi2_classical;
  DivergenceValue triangular_quantum;
  DivergenceValue triangular_classical;
  double f_bound_quantum;
  double f_bound_classical;
  double max_discrepancy;             // +inf if finiteness ever disagrees
  bool consistent;                    // max_discrepancy <= 1e-10
};

// Runs the quantum pipeline on diagonal rho, sigma, theta built from the
// inputs and compares every stage against the direct classical formulas.
// In the commuting case the two routes must agree to 1e-10.
ReductionReport commuting_reduction_check(const std::vector<double>& p_eigs,
                                          const std::vector<double>& q_eigs,
                                          const std::vector<double>& theta_vals);

}  // namespace qtur
