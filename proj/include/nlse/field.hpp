#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "nlse/grid.hpp"
#include "nlse/nonlinearity.hpp"
#include "nlse/profile.hpp"

namespace nlse {

/// Complex-valued state on a uniform periodic grid; carrier of mass, energy,
/// norms and gradients. Fields are compared only on identical grids.
struct ComplexField {
    Grid grid;
    std::vector<std::complex<double>> v;
};

struct RealField {
    Grid grid;
    std::vector<double> v;
};

ComplexField make_field(const Grid& grid,
                        const std::function<std::complex<double>(double)>& f);
RealField make_real_field(const Grid& grid, const std::function<double(double)>& f);
ComplexField to_complex(const RealField& f);

ComplexField profile_field(const ProfileSolution& prof);
RealField profile_real(const ProfileSolution& prof);
RealField profile_derivative(const ProfileSolution& prof);

// Rectangle-rule integrals; spectrally accurate for smooth periodic fields.
double mass(const ComplexField& u);                    // int |u|^2
double norm_l2(const ComplexField& u);
double norm_lp_pow(const ComplexField& u, double d);   // int |u|^d
std::complex<double> inner_l2(const ComplexField& u, const ComplexField& w);

// H^1 quantities, defined spectrally: sum (1 + k^2) u_k conj(w_k).
double norm_h1(const ComplexField& u);
std::complex<double> inner_h1(const ComplexField& u, const ComplexField& w);
double h1_distance(const ComplexField& u, const ComplexField& w);

ComplexField spectral_derivative(const ComplexField& u);
ComplexField translate(const ComplexField& u, double y); // u(. + y)
ComplexField scale_to_mass(const ComplexField& u, double lambda);

// E(u) = 1/2 int |u'|^2 + int G(|u|).
double energy(const ComplexField& u, const Nonlinearity& nl);

// dE(u) against the real L^2 pairing: -u'' + F'(u).
ComplexField energy_gradient(const ComplexField& u, const Nonlinearity& nl);

// Hessian quadratic form at a profile: xi(v) = int |v'|^2 + (G''(R0)+omega) v^2.
double hessian_form(const RealField& v, const ProfileSolution& R0, const Nonlinearity& nl);

// sup over integer intervals J_k = (k, k+1) of the local L^2 norm; partial
// intervals at the domain boundary are dropped.
double vanishing_sup(const ComplexField& u);

// Right-hand side of the vanishing inequality (d >= 6 and d <= 6 branches).
double vanishing_bound(const ComplexField& u, double d, double s_const);
bool verify_vanishing_inequality(const ComplexField& u, double d, double s_const);

struct OrbitDistanceResult {
    double distance = 0;
    double shift = 0;                  // optimal y
    std::complex<double> phase{1, 0};  // optimal unit z
    bool degenerate_phase = false;
};

// Minimizes |u - z R(. - y)|_H1 over |z| = 1 and shifts y: z in closed form,
// y from the spectral cross-correlation refined by parabolic interpolation.
OrbitDistanceResult orbit_distance(const ComplexField& u, const ProfileSolution& R);

struct RecenterResult {
    RealField field;
    double shift = 0;
    std::complex<double> phase{1, 0};
    double residual = 0; // |Im u|_2 / |u|_2 after alignment
};

// Translates the modulus peak to x = 0, removes the phase at the peak and
// returns the real part with a phase-constancy diagnostic.
RecenterResult recenter_align(const ComplexField& u);

} // namespace nlse
