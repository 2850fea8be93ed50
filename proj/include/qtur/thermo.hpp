#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qtur/bounds.hpp"
#include "qtur/divergences.hpp"
#include "qtur/matrix_core.hpp"

namespace qtur {

// Backward reference state for entropy production: sigma = rho'_S (x) rho_E
// (bath reset) or rho_S (x) rho_E (both reset).
enum class ResetProtocol { BathReset, BothReset };

ResetProtocol protocol_from_string(const std::string& name);
std::string to_string(ResetProtocol protocol);

// One collision: system and environment states plus the joint coupling.
struct ThermoSetup {
  DensityMatrix rho_S;
  DensityMatrix rho_E;
  Unitary u;
  ResetProtocol protocol;

  ThermoSetup(DensityMatrix rho_s, DensityMatrix rho_e, Unitary joint_u,
              ResetProtocol proto);

  int dim_S() const { return rho_S.dim(); }
  int dim_E() const { return rho_E.dim(); }
};

struct ForwardStates {
  DensityMatrix rho;        // U (rho_S (x) rho_E) U^dagger
  DensityMatrix sigma;      // protocol-dependent reference
  DensityMatrix rho_S_t;    // tr_E rho
  DensityMatrix rho_E_t;    // tr_S rho
};

ForwardStates forward_states(const ThermoSetup& setup);

// Sigma = S(rho || sigma) for the setup's protocol; 0 when U = I under bath
// reset, and always >= 0 up to rounding.
DivergenceValue entropy_production(const ThermoSetup& setup);

struct FluxSummary {
  double phi;     // tr_E((rho_E - rho'_E) ln rho_E)
  double var_t;   // <<ln rho_E>> under rho'_E
  double var_0;   // <<ln rho_E>> under rho_E

  nlohmann::json to_json() const;
};

// Entropy-flux TUR: Sigma >= F(phi, var_t, var_0), the closed-form bound with
// theta = I_S (x) ln rho_E. The bound is even in phi, and phi = 0 collapses
// it to Sigma >= 0. Throws SingularEnvironment when rho_E is rank-deficient.
std::pair<FluxSummary, BoundReport> entropy_flux_tur(const ThermoSetup& setup);

// chi^2_lambda(rho, U rho U^dagger) through the eigenbasis of rho alone:
// sigma shares the spectrum of rho and its eigenvectors are U|p_j>.
DivergenceValue unitary_chi2(const DensityMatrix& rho, const Unitary& u,
                             Lambda lambda);

// exp(-i h tau) through the spectral decomposition of h.
Unitary hamiltonian_evolution(const Observable& h, double tau);

struct QfiExpansionReport {
  double qfi;
  std::vector<double> taus;
  std::vector<double> deltas;      // delta(rho, U_tau rho U_tau^dagger)
  std::vector<double> residuals;   // |delta - qfi tau^2 / 4|
  double slope;                    // log-log fit of residual vs tau
  bool trivial;                    // [rho, H] = 0: everything vanishes
  bool satisfied;                  // trivial, or slope >= 3.5
};

// Verifies delta(rho, e^{-iH tau} rho e^{iH tau}) = F_Q tau^2 / 4 up to a
// remainder scaling as tau^4. Throws SingularState unless rho is full rank.
QfiExpansionReport qfi_expansion_check(const DensityMatrix& rho,
                                       const Observable& h,
                                       const std::vector<double>& taus);

struct CrLimitReport {
  double qfi;
  double rhs;                           // 4 / qfi
  double derivative_oracle;             // tr(theta (-i)[H, rho])
  std::vector<double> taus;             // sorted descending
  std::vector<double> lhs;              // 4 var / (finite-difference rate)^2
  std::vector<double> fd_derivatives;
  bool inequality_ok;                   // lhs >= rhs - 1e-9 at every tau
  double extrapolated_lhs;              // Richardson-in-tau^2 limit estimate
  bool limit_ok;                        // extrapolation within 1e-6 relative
  bool satisfied;
};

// Finite-tau Cramer-Rao limit: 4 <<theta>> / ((<theta>_tau - <theta>_0)/tau)^2
// approaches 4 / F_Q from above as tau -> 0. Throws SingularState for
// rank-deficient rho and DegenerateDerivative when d<theta>/dt vanishes.
CrLimitReport cramer_rao_limit_check(const DensityMatrix& rho,
                                     const Observable& h,
                                     const Observable& theta_hat,
                                     const std::vector<double>& taus);

// e^{-beta h} / tr(e^{-beta h}); beta = 0 gives the maximally mixed state.
DensityMatrix thermal_state(double beta, const Observable& h);

// cos(angle) I + i sin(angle) SWAP on two subsystems of equal dimension.
Unitary partial_swap(int dim, double angle);

}  // namespace qtur
