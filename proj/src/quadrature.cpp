#include "nlse/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "nlse/errors.hpp"

namespace nlse {

namespace {

// Legendre P_n and its derivative at x.
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

GaussRule make_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev initial guess, Newton refinement.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            auto [p, dp] = legendre(n, x);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        auto [p, dp] = legendre(n, x);
        (void)p;
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

} // namespace

const GaussRule& gauss_legendre_rule(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
    return it->second;
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b, int n) {
    const GaussRule& rule = gauss_legendre_rule(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

namespace {

double adaptive_impl(const std::function<double(double)>& f, double a, double b,
                     double tol, int depth, int max_depth) {
    const GaussRule& r10 = gauss_legendre_rule(10);
    const GaussRule& r20 = gauss_legendre_rule(20);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double coarse = 0.0, fine = 0.0;
    for (int i = 0; i < 10; ++i) coarse += r10.weights[i] * f(mid + half * r10.nodes[i]);
    for (int i = 0; i < 20; ++i) {
        double v = f(mid + half * r20.nodes[i]);
        if (!std::isfinite(v))
            throw QuadratureError("non-finite integrand in adaptive quadrature");
        fine += r20.weights[i] * v;
    }
    coarse *= half;
    fine *= half;
    if (std::abs(fine - coarse) <= tol || half * 2 < 1e-14 * std::abs(b - a) + 1e-300)
        return fine;
    if (depth >= max_depth)
        throw QuadratureError("adaptive quadrature failed to converge");
    return adaptive_impl(f, a, mid, 0.5 * tol, depth + 1, max_depth) +
           adaptive_impl(f, mid, b, 0.5 * tol, depth + 1, max_depth);
}

} // namespace

double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_depth) {
    if (!(b > a)) {
        if (a == b) return 0.0;
        throw std::invalid_argument("adaptive_quad: requires a < b");
    }
    return adaptive_impl(f, a, b, abs_tol, 0, max_depth);
}

} // namespace nlse
