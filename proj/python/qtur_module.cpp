#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qtur/bounds.hpp"
#include "qtur/divergences.hpp"
#include "qtur/matrix_core.hpp"
#include "qtur/ns_map.hpp"
#include "qtur/thermo.hpp"

namespace py = pybind11;
using namespace qtur;

namespace {

double as_double(const DivergenceValue& v) { return v.value(); }

py::dict bound_dict(const BoundReport& r) {
  py::dict d;
  d["divergence"] = as_double(r.divergence);
  d["lower_bound"] = r.lower_bound;
  d["slack"] = r.slack;
  d["satisfied"] = r.satisfied;
  d["context"] = r.context;
  return d;
}

}  // namespace

PYBIND11_MODULE(qturpy, m) {
  m.doc() = "Entropy-production TUR toolkit: divergences, bounds, collisions";

  py::register_exception<Error>(m, "QturError");

  m.def(
      "relative_entropy",
      [](const ComplexMatrix& rho, const ComplexMatrix& sigma) {
        return as_double(quantum_relative_entropy(DensityMatrix(rho),
                                                  DensityMatrix(sigma)));
      },
      py::arg("rho"), py::arg("sigma"),
      "S(rho || sigma); +inf outside the support condition");

  m.def(
      "chi2_lambda",
      [](const ComplexMatrix& rho, const ComplexMatrix& sigma, double lam) {
        return as_double(quantum_chi2_lambda(DensityMatrix(rho),
                                             DensityMatrix(sigma),
                                             Lambda(lam)));
      },
      py::arg("rho"), py::arg("sigma"), py::arg("lam"),
      "Generalized chi^2 divergence of order lam in [0, 1]");

  m.def(
      "triangular_discrimination",
      [](const ComplexMatrix& rho, const ComplexMatrix& sigma) {
        return as_double(triangular_discrimination(DensityMatrix(rho),
                                                   DensityMatrix(sigma)));
      },
      py::arg("rho"), py::arg("sigma"));

  m.def(
      "f_lambda",
      [](double x, double y, double z, double lam) {
        return f_lambda(x, y, z, Lambda(lam));
      },
      py::arg("mean_diff"), py::arg("var_rho"), py::arg("var_sigma"),
      py::arg("lam"));

  m.def(
      "closed_form_bound",
      [](double mean_diff, double var_rho, double var_sigma) {
        return F_closed_form({mean_diff, var_rho, var_sigma});
      },
      py::arg("mean_diff"), py::arg("var_rho"), py::arg("var_sigma"),
      "Integral of f_lambda over lam in [0, 1], in closed form");

  m.def(
      "entropy_tur",
      [](const ComplexMatrix& rho, const ComplexMatrix& sigma,
         const ComplexMatrix& theta) {
        return bound_dict(entropy_tur_check(DensityMatrix(rho),
                                            DensityMatrix(sigma),
                                            Observable(theta)));
      },
      py::arg("rho"), py::arg("sigma"), py::arg("theta"));

  m.def(
      "chi2_tur",
      [](const ComplexMatrix& rho, const ComplexMatrix& sigma,
         const ComplexMatrix& theta, double lam) {
        return bound_dict(chi2_lambda_tur_check(DensityMatrix(rho),
                                                DensityMatrix(sigma),
                                                Observable(theta),
                                                Lambda(lam)));
      },
      py::arg("rho"), py::arg("sigma"), py::arg("theta"), py::arg("lam"));

  m.def(
      "ns_pair",
      [](const ComplexMatrix& rho, const ComplexMatrix& sigma,
         const ComplexMatrix& theta) {
        const NSPair pair =
            ns_pair(DensityMatrix(rho), DensityMatrix(sigma),
                    Observable(theta));
        py::dict d;
        d["dim"] = pair.dim;
        d["p"] = pair.p_dist.weights();
        d["q"] = pair.q_dist.weights();
        d["theta"] = pair.theta.values;
        return d;
      },
      py::arg("rho"), py::arg("sigma"), py::arg("theta"),
      "Classical embedding (P, Q, Theta) on flat indices i*n + j");

  m.def(
      "quantum_fisher_information",
      [](const ComplexMatrix& rho, const ComplexMatrix& h) {
        return quantum_fisher_information(DensityMatrix(rho), Observable(h));
      },
      py::arg("rho"), py::arg("h"));

  m.def("exchange_h", &exchange_tur_h, py::arg("x"),
        "h(x) = x tanh(x/2)");
  m.def("exchange_g", &exchange_tur_g, py::arg("x"),
        "Inverse of h on x > 0");

  m.def(
      "thermal_state",
      [](double beta, const ComplexMatrix& h) {
        return thermal_state(beta, Observable(h)).matrix();
      },
      py::arg("beta"), py::arg("h"));

  m.def(
      "partial_swap",
      [](int dim, double angle) { return partial_swap(dim, angle).matrix(); },
      py::arg("dim"), py::arg("angle"));

  m.def(
      "entropy_production",
      [](const ComplexMatrix& rho_s, const ComplexMatrix& rho_e,
         const ComplexMatrix& u, const std::string& protocol) {
        const ThermoSetup setup(DensityMatrix(rho_s), DensityMatrix(rho_e),
                                Unitary(u), protocol_from_string(protocol));
        return as_double(entropy_production(setup));
      },
      py::arg("rho_s"), py::arg("rho_e"), py::arg("u"),
      py::arg("protocol") = "bath_reset");

  m.def(
      "flux_tur",
      [](const ComplexMatrix& rho_s, const ComplexMatrix& rho_e,
         const ComplexMatrix& u, const std::string& protocol) {
        const ThermoSetup setup(DensityMatrix(rho_s), DensityMatrix(rho_e),
                                Unitary(u), protocol_from_string(protocol));
        const auto [flux, report] = entropy_flux_tur(setup);
        py::dict d = bound_dict(report);
        d["phi"] = flux.phi;
        d["var_t"] = flux.var_t;
        d["var_0"] = flux.var_0;
        return d;
      },
      py::arg("rho_s"), py::arg("rho_e"), py::arg("u"),
      py::arg("protocol") = "bath_reset");
}
