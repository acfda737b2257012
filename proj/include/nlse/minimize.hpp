#pragma once

#include <optional>
#include <vector>

#include "nlse/field.hpp"

namespace nlse {

enum class MinimizeStatus { converged, no_descent, max_iterations };

std::string to_string(MinimizeStatus s);

struct MinimizeResult {
    ComplexField u;        // aligned positive representative
    double I_value = 0;    // energy at the minimizer
    double omega = 0;      // extracted Lagrange multiplier
    int iterations = 0;
    double residual = 0;   // | -u'' + F'(u) + omega u |_L2
    MinimizeStatus status = MinimizeStatus::max_iterations;
};

struct MinimizeOptions {
    int max_iterations = 50000;
    double grad_tol = 1e-8;      // on the projected gradient, L^2
    // H^1 preconditioning of the descent direction (Sobolev gradient). The
    // plain L^2 flow is kept as an option; its stable step is O(h^2) and it
    // needs O(1/h^2) iterations.
    bool precondition = true;
    double tau0 = 0;             // 0 = policy default
    std::optional<ComplexField> warm_start;
    bool allow_profile_init = true;
};

/// Mass-projected descent of E over S(lambda): u <- Pi_lambda(u - tau D grad E)
/// with backtracking on E. Extracts omega from the Euler-Lagrange pairing and
/// post-processes with recenter_align.
MinimizeResult minimize_energy(const Nonlinearity& nl, double lambda,
                               const Grid& grid, const MinimizeOptions& opts = {});

struct ICurve {
    std::vector<double> lambda, I, omega, residual;
    std::vector<int> iterations;
    std::vector<MinimizeStatus> status;
    double lambda_star_estimate = 0;
};

/// minimize_energy per sample, warm-started from the previous minimizer
/// rescaled; lambda_star is estimated as the largest sampled lambda with
/// |I| < 1e-6 (0 if none).
ICurve i_curve(const Nonlinearity& nl, const std::vector<double>& lambdas,
               const Grid& grid, const MinimizeOptions& opts = {});

// Relative defect of 2(|u'|^2 - I) = omega lambda.
double existence_identity_defect(const MinimizeResult& res, const Nonlinearity& nl);

// Compares the aligned minimizer with the quadrature profile at the extracted
// omega: |recenter(u) - R_omega|_H1 / |R_omega|_H1.
double cross_validate(const MinimizeResult& res, const Nonlinearity& nl);

} // namespace nlse
