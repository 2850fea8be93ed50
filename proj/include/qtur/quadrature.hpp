#pragma once

#include <functional>
#include <vector>

namespace qtur {

// Gauss-Legendre nodes and weights on [0, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Rules are computed once per order and cached (thread-safe).
const GaussLegendreRule& gauss_legendre_01(int n);

double integrate_01(const std::function<double(double)>& f, int n);

// Node-doubling refinement: evaluates at n0, 2*n0, ... until two successive
// estimates differ by less than `tol` (or n exceeds `n_max`, returning the
// last estimate).
double integrate_01_adaptive(const std::function<double(double)>& f,
                             double tol = 1e-9, int n0 = 64,
                             int n_max = 8192);

}  // namespace qtur
