#pragma once

#include <vector>

namespace tunnel {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule mapped onto [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

// Composite rule: [a, b] split into `panels` equal panels of n points each.
QuadratureRule composite_gauss_legendre(int n, int panels, double a, double b);

}  // namespace tunnel
