#pragma once

#include <string>
#include <vector>

#include "nlse/grid.hpp"
#include "nlse/nonlinearity.hpp"

namespace nlse {

/// Real soliton profile R_omega sampled on a symmetric periodic grid of
/// length 2X. R solves R'' = G'(R) + omega R with R(0) = R*(omega),
/// R'(0) = 0, decaying at both ends.
struct ProfileSolution {
    double omega = 0;
    double r_star = 0;
    Grid grid;
    std::vector<double> R;
    std::vector<double> dR;
    double first_integral_defect = 0; // max over grid of |R'^2 - Q(omega, R)|
    double tail_value = 0;            // R at the domain edge

    double half_width() const { return 0.5 * grid.length; }
};

/// Sampled mass-frequency curve: the non-degeneracy certificate when
/// dlambda > 0 throughout.
struct MassCurve {
    std::vector<double> omega;
    std::vector<double> lambda;
    std::vector<double> dlambda;
    std::vector<std::string> method; // "integral" or "finite_difference"
};

// Smallest s > 0 with Q(omega, s) = 0, refined by bisection; asserts the
// transversality dQ/ds (omega, R*) < 0. Throws NoRootError / DegenerateError.
double r_star(const Nonlinearity& nl, double omega);

// dR*/domega = -R*^2 / (2 G'(R*) + 2 omega R*). Throws DegenerateError when
// the denominator is below tolerance.
double r_star_derivative(const Nonlinearity& nl, double omega);

// Psi(theta, s, omega) = omega theta^2 s^-4 + 2 s^-6 G(s theta)
//                      = s^-6 Q(omega, s theta).
double psi(const Nonlinearity& nl, double theta, double s, double omega);

// d/domega of Psi(theta, R*(omega), omega) in the raw (uncancelled) form.
double dpsi_domega(const Nonlinearity& nl, double omega, double theta);

// I(omega, theta) = 2 H(R* theta) - 2 theta^2 H(R*); vanishes at theta = 0, 1
// and is <= 0 on [0, 1] when (G3) holds.
double capital_i(const Nonlinearity& nl, double omega, double theta);

// lambda(omega) = |R_omega|_L2^2 by quadrature of 2 int_0^1 theta^2 Psi^-1/2,
// with the endpoint singularity removed by theta = 1 - tau^2. Absolute
// accuracy ~1e-8.
double mass_of_omega(const Nonlinearity& nl, double omega);

// lambda'(omega) by quadrature of the cancelled integrand
// -(R*'/R*^7) int theta^2 I(omega, theta) Psi^-3/2, cross-checked against a
// central finite difference of mass_of_omega (ConsistencyError on mismatch).
double mass_derivative(const Nonlinearity& nl, double omega);

struct ProfileOptions {
    int substeps = 0;        // RK4 substeps per grid interval; 0 = automatic
    double clamp_threshold = 1e-8; // switch to the exponential tail below this
};

// Integrates the profile IVP by shooting (RK4 in extended precision with
// bisection refinement of the initial amplitude), clamps to the stable
// exponential tail, and mirrors onto the symmetric grid.
ProfileSolution build_profile(const Nonlinearity& nl, double omega,
                              double half_width, int n, ProfileOptions opts = {});

// Default grid policy: X = max(20, 12/sqrt(omega)), n = 4096.
ProfileSolution build_profile(const Nonlinearity& nl, double omega);

// h * sum R^2 on the profile grid.
double profile_discrete_mass(const ProfileSolution& prof);

// lambda(omega), lambda'(omega) over a sample of frequencies; jobs > 1 runs
// samples concurrently. Samples where R* does not exist are skipped.
MassCurve mass_curve(const Nonlinearity& nl, const std::vector<double>& omegas,
                     int jobs = 1);

// Inverts the mass curve: the omega with mass_of_omega(omega) = lambda,
// located by bracketed bisection. Throws NoRootError if lambda is not
// attained on the scan range.
double omega_of_mass(const Nonlinearity& nl, double lambda);

} // namespace nlse
