#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtur/bounds.hpp"
#include "qtur/classical.hpp"
#include "qtur/divergences.hpp"
#include "qtur/matrix_core.hpp"
#include "qtur/thermo.hpp"

namespace qtur {

// Hard-check tolerances; the module defaults, overridable from the CLI.
struct Tolerances {
  double entropy_slack = 1e-8;
  double chi2_slack = 1e-9;
  double chain_slack = 1e-9;
  double ns_kl = 1e-8;
  double ns_mean = 1e-9;
  double ns_var = 1e-9;
  double triangular_slack = 1e-9;
  double delta_symmetry = 1e-10;
  double operator_route = 1e-8;
  double reduction = 1e-10;
  double flux_slack = 1e-8;
  double second_law = 1e-9;
};

// A seeded (rho, sigma, theta) triple; rho's rank cycles through dim and
// dim - 1 so campaigns also exercise support subtleties.
struct VerifyInstance {
  int instance;
  int dim;
  int rank_rho;
  std::uint64_t seed;
  DensityMatrix rho;
  DensityMatrix sigma;
  Observable theta;

  nlohmann::json to_json() const;
};

VerifyInstance make_verify_instance(const std::vector<int>& dims,
                                    std::uint64_t campaign_seed, int index);

struct VerifyRow {
  int instance;
  int dim;
  int rank_rho;
  std::uint64_t seed;
  double entropy;           // S(rho||sigma), +inf allowed
  double f_bound;
  double entropy_slack;     // +inf when entropy is
  double chi2_min_slack;    // min over the lambda grid; +inf if all trivial
  double chain_margin;      // worst margin in the two-step moment chain
  double ns_kl_gap;         // |D(P|Q) - S|; +inf if finiteness disagrees
  double mean_gap;          // |<Theta>_P - <theta>_rho|
  double var_margin;        // min NS variance-domination margin
  double triangular_slack;  // nan when |a| too small to test
  double delta_gap;         // triangular symmetry |d(r,s) - d(s,r)|, nan ditto
  bool ok;
  std::string failure;      // first failed check, empty when ok
};

VerifyRow run_verify_instance(const VerifyInstance& inst,
                              const std::vector<double>& lambda_grid,
                              const Tolerances& tols);

std::vector<VerifyRow> run_verify_campaign(const std::vector<int>& dims,
                                           int n_instances,
                                           std::uint64_t seed,
                                           const std::vector<double>& lambda_grid,
                                           const Tolerances& tols);

// Operator-route cross-check instance (dims 2-4, both states may be
// rank-deficient): max |operator - spectral| over interior lambdas.
struct OperatorRouteRow {
  int instance;
  int dim;
  int rank_rho;
  int rank_sigma;
  std::uint64_t seed;
  double max_gap;
  bool ok;
};

OperatorRouteRow run_operator_route_instance(const std::vector<int>& dims,
                                             std::uint64_t campaign_seed,
                                             int index,
                                             const std::vector<double>& lambdas,
                                             const Tolerances& tols);

// One grid point of the collision sweep. sign_flip_exact records that
// F(phi) and F(-phi) agree bit for bit.
struct FluxRow {
  double angle;
  double entropy;  // Sigma for the configured protocol
  double phi;
  double var_t;
  double var_0;
  double bound;
  double slack;
  bool satisfied;
  bool sign_flip_exact;
};

// Thermal collision: dim-level system and environment at beta_s / beta_e
// (Pauli-Z Hamiltonian for qubits, equally spaced levels otherwise), partial
// swap coupling, one row per angle.
std::vector<FluxRow> run_flux_sweep(int dim, double beta_s, double beta_e,
                                    const std::vector<double>& angles,
                                    ResetProtocol protocol,
                                    const Tolerances& tols);

struct ReduceRow {
  int instance;
  int dim;
  std::uint64_t seed;
  double max_discrepancy;
  bool ok;
};

ReduceRow run_reduce_instance(const std::vector<int>& dims,
                              std::uint64_t campaign_seed, int index,
                              const Tolerances& tols);

// Random full-rank collision setups for second-law sweeps.
struct SecondLawRow {
  int instance;
  std::string protocol;
  double entropy;
  bool ok;
};

std::vector<SecondLawRow> run_second_law_campaign(int n_setups,
                                                  std::uint64_t seed,
                                                  const Tolerances& tols);

}  // namespace qtur
