#pragma once

#include <vector>

#include "nlse/field.hpp"
#include "nlse/profile.hpp"

namespace nlse {

enum class Parity { even, odd, all };

enum class Discretization { spectral, second_difference };

/// Discrete linearized operator L+ v = -v'' + (G''(R0) + omega0) v at a
/// profile. apply() uses the configured Laplacian; eigenvalue location and
/// linear solves go through the second-difference tridiagonal with Dirichlet
/// truncation at the domain edges.
class LPlusOperator {
public:
    LPlusOperator(const ProfileSolution& R0, const Nonlinearity& nl,
                  Discretization disc = Discretization::spectral);

    const Grid& grid() const { return grid_; }
    double omega() const { return omega_; }
    Discretization discretization() const { return disc_; }
    const std::vector<double>& potential() const { return potential_; }

    RealField apply(const RealField& v) const;

private:
    Grid grid_;
    double omega_;
    Discretization disc_;
    std::vector<double> potential_; // G''(R0) + omega at the grid points
};

LPlusOperator assemble(const ProfileSolution& R0, const Nonlinearity& nl,
                       Discretization disc = Discretization::spectral);

// |L+(R0')|_2 / |R0'|_2 with R0' taken from the profile's derivative samples.
double kernel_residual(const LPlusOperator& op, const ProfileSolution& R0);

struct Spectrum {
    std::vector<double> values;
    std::vector<RealField> vectors;
};

/// Lowest k eigenvalues (and eigenvectors) on the requested parity subspace:
/// Sturm bisection on the parity-reduced tridiagonal, inverse iteration for
/// vectors. With the spectral discretization the reported values are Rayleigh
/// quotients of those vectors under the spectral operator.
Spectrum spectrum(const LPlusOperator& op, int k, Parity parity);

struct SpectrumReport {
    double omega = 0;
    double lowest_even = 0;
    double lowest_odd = 0;
    double kernel_residual = 0;
    double constrained_even_min = 0; // min xi over {v even, <v,R0> = 0, |v| = 1}
    double resolvent_inner = 0;      // <R0, L+^{-1} R0> on the even subspace
    double lambda_prime_half = 0;    // lambda'(omega)/2 from the Psi-integral route
};

/// The non-degeneracy certificate: positivity of the constrained even minimum
/// of xi, plus <R0, L+^{-1} R0> cross-checked against lambda'(omega)/2.
SpectrumReport nondegeneracy_certificate(const LPlusOperator& op,
                                         const ProfileSolution& R0,
                                         const Nonlinearity& nl);

} // namespace nlse
