#pragma once

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "nlse/errors.hpp"

namespace nlse {

/// Scalar nonlinear term G of the energy density, together with the growth
/// parameters used by the hypothesis checkers. G is even, G(0) = 0; the
/// derivative G' is odd and G'' even. Implementations must evaluate the even
/// extension for negative arguments.
class Nonlinearity {
public:
    struct HypothesisParams {
        double p = 0;      // lower growth exponent, 2 < p <= q
        double q = 0;      // upper growth exponent
        double p_star = 0; // lower-bound exponent, 2 < p_star < 6
        double s_star = 0; // threshold above which the lower bound applies
        double C = 0;      // bound constant
    };

    virtual ~Nonlinearity() = default;

    virtual double g(double s) const = 0;  // G(s)
    virtual double gp(double s) const = 0; // G'(s)

    // G''(s); only when has_gpp() returns true.
    virtual double gpp(double s) const;
    virtual bool has_gpp() const { return false; }

    // G'(r)/r with the removable singularity at r = 0 handled; used by the
    // nonlinear phase rotation of the split-step flow.
    virtual double phase_rate(double r) const;

    // Extended-precision evaluations for the profile shooting integrator.
    // Default: round-trip through double.
    virtual long double g_l(long double s) const;
    virtual long double gp_l(long double s) const;

    virtual HypothesisParams params() const = 0;
    virtual std::string name() const = 0;
};

/// Combined power family G(s) = -a|s|^p + b|s|^q.
class CombinedPower : public Nonlinearity {
public:
    CombinedPower(double a, double b, double p, double q);

    double g(double s) const override;
    double gp(double s) const override;
    double gpp(double s) const override;
    bool has_gpp() const override { return true; }
    double phase_rate(double r) const override;
    long double g_l(long double s) const override;
    long double gp_l(long double s) const override;
    HypothesisParams params() const override;
    std::string name() const override;

    // Closed form of 12G - 7sG' + s^2 G'':
    // a(p-2)(6-p)|s|^p - b(q-2)(6-q)|s|^q.
    double l_closed_form(double s) const;

    double a() const { return a_; }
    double b() const { return b_; }
    double p() const { return p_; }
    double q() const { return q_; }

private:
    double a_, b_, p_, q_;
};

// Scalar condition functions derived from G.

// V(s) = -2G(s)/s^2, s > 0.
double eval_V(const Nonlinearity& nl, double s);
// dV/ds, s > 0.
double eval_V_prime(const Nonlinearity& nl, double s);
// Q(omega, s) = omega s^2 + 2G(s).
double eval_Q(const Nonlinearity& nl, double omega, double s);
// dQ/ds = 2 omega s + 2G'(s).
double eval_Q_ds(const Nonlinearity& nl, double omega, double s);
// L(s) = 12G(s) - 7sG'(s) + s^2 G''(s); requires G''.
double eval_L(const Nonlinearity& nl, double s);
// H(s) = -6G(s) + sG'(s).
double eval_H(const Nonlinearity& nl, double s);
// F'(s) = G'(|s|) s/|s| for s != 0, F'(0) = 0 (C identified with R^2).
std::complex<double> eval_F_grad(const Nonlinearity& nl, std::complex<double> s);

/// Splits G into G1 + G2 with G1' = sigma G', G2' = (1 - sigma) G' for a
/// piecewise-linear cutoff sigma (1 on [-r1, r1], 0 outside [-r2, r2]).
/// Requires 0 < r1 < r2. The returned parts hold a reference to the base.
std::pair<std::shared_ptr<const Nonlinearity>, std::shared_ptr<const Nonlinearity>>
split_g(std::shared_ptr<const Nonlinearity> base, double r1, double r2);

// Hypothesis checking for the combined power family.

enum class Verdict { pass, fail, not_checked };

std::string to_string(Verdict v);

struct ConditionResult {
    Verdict verdict = Verdict::not_checked;
    std::map<std::string, double> witness;
    std::string note;
};

struct ConditionReport {
    ConditionResult g1, g2, g3, g4, g5;
    bool all_pass() const;
};

/// Samples omega in [omega_lo, omega_hi] (n_samples geometric points) and
/// checks (G1)-(G5): G1 by a log-grid search for G < 0, G2/G4 by exponent
/// inspection, G3 by sampling L on (0, R*(omega)], G5 by contiguity of
/// {omega : V'(R*(omega)) > 0} among the samples.
ConditionReport check_conditions(const CombinedPower& nl, double omega_lo,
                                 double omega_hi, int n_samples);

} // namespace nlse
