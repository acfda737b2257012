#pragma once

#include <functional>
#include <vector>

namespace nlse {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre_rule(int n);

// Fixed n-point Gauss-Legendre estimate on [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int n);

// Adaptive quadrature by interval bisection; the local error indicator is the
// difference between 10- and 20-point Gauss estimates. Throws QuadratureError
// if the integrand is non-finite at a node or the subdivision limit is hit.
double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_depth = 40);

} // namespace nlse
