#include "nlse/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "nlse/profile.hpp"
#include "nlse/quadrature.hpp"

namespace nlse {

namespace {

// |x|^e with a fast path for small integer exponents.
double pow_abs(double x, double e) {
    double ax = std::abs(x);
    int ei = static_cast<int>(e);
    if (e == static_cast<double>(ei) && ei >= 0 && ei <= 12) {
        double r = 1.0;
        for (int i = 0; i < ei; ++i) r *= ax;
        return r;
    }
    return std::pow(ax, e);
}

long double pow_abs_l(long double x, long double e) {
    long double ax = fabsl(x);
    int ei = static_cast<int>(e);
    if (e == static_cast<long double>(ei) && ei >= 0 && ei <= 12) {
        long double r = 1.0L;
        for (int i = 0; i < ei; ++i) r *= ax;
        return r;
    }
    return powl(ax, e);
}

} // namespace

double Nonlinearity::gpp(double) const {
    throw CapabilityError("nonlinearity '" + name() + "' does not provide G''");
}

double Nonlinearity::phase_rate(double r) const {
    r = std::abs(r);
    if (r < 1e-15) return 0.0;
    return gp(r) / r;
}

long double Nonlinearity::g_l(long double s) const {
    return g(static_cast<double>(s));
}

long double Nonlinearity::gp_l(long double s) const {
    return gp(static_cast<double>(s));
}

CombinedPower::CombinedPower(double a, double b, double p, double q)
    : a_(a), b_(b), p_(p), q_(q) {
    if (a < 0 || b < 0) throw std::invalid_argument("CombinedPower: coefficients must be >= 0");
    if (!(p > 1) || !(q > 1)) throw std::invalid_argument("CombinedPower: exponents must be > 1");
    if (q < p) throw std::invalid_argument("CombinedPower: requires q >= p");
}

double CombinedPower::g(double s) const {
    return -a_ * pow_abs(s, p_) + b_ * pow_abs(s, q_);
}

double CombinedPower::gp(double s) const {
    return (-a_ * p_ * pow_abs(s, p_ - 2) + b_ * q_ * pow_abs(s, q_ - 2)) * s;
}

double CombinedPower::gpp(double s) const {
    return -a_ * p_ * (p_ - 1) * pow_abs(s, p_ - 2) + b_ * q_ * (q_ - 1) * pow_abs(s, q_ - 2);
}

double CombinedPower::phase_rate(double r) const {
    // G'(r)/r = -a p r^{p-2} + b q r^{q-2}, already regular at r = 0 for p > 2.
    r = std::abs(r);
    return -a_ * p_ * pow_abs(r, p_ - 2) + b_ * q_ * pow_abs(r, q_ - 2);
}

long double CombinedPower::g_l(long double s) const {
    return -static_cast<long double>(a_) * pow_abs_l(s, p_) +
           static_cast<long double>(b_) * pow_abs_l(s, q_);
}

long double CombinedPower::gp_l(long double s) const {
    return (-static_cast<long double>(a_) * p_ * pow_abs_l(s, p_ - 2) +
            static_cast<long double>(b_) * q_ * pow_abs_l(s, q_ - 2)) * s;
}

Nonlinearity::HypothesisParams CombinedPower::params() const {
    HypothesisParams par;
    par.p = p_;
    par.q = q_;
    par.p_star = p_;
    par.s_star = 0.0;
    par.C = std::max(a_ * p_, b_ * q_);
    if (par.C == 0) par.C = 1.0;
    return par;
}

std::string CombinedPower::name() const {
    std::ostringstream os;
    os << "combined_power(a=" << a_ << ",b=" << b_ << ",p=" << p_ << ",q=" << q_ << ")";
    return os.str();
}

double CombinedPower::l_closed_form(double s) const {
    return a_ * (p_ - 2) * (6 - p_) * pow_abs(s, p_) - b_ * (q_ - 2) * (6 - q_) * pow_abs(s, q_);
}

double eval_V(const Nonlinearity& nl, double s) {
    if (!(s > 0)) throw std::domain_error("eval_V: requires s > 0");
    return -2.0 * nl.g(s) / (s * s);
}

double eval_V_prime(const Nonlinearity& nl, double s) {
    if (!(s > 0)) throw std::domain_error("eval_V_prime: requires s > 0");
    return -2.0 * nl.gp(s) / (s * s) + 4.0 * nl.g(s) / (s * s * s);
}

double eval_Q(const Nonlinearity& nl, double omega, double s) {
    return omega * s * s + 2.0 * nl.g(s);
}

double eval_Q_ds(const Nonlinearity& nl, double omega, double s) {
    return 2.0 * omega * s + 2.0 * nl.gp(s);
}

double eval_L(const Nonlinearity& nl, double s) {
    if (!nl.has_gpp())
        throw CapabilityError("eval_L: nonlinearity does not provide G''");
    return 12.0 * nl.g(s) - 7.0 * s * nl.gp(s) + s * s * nl.gpp(s);
}

double eval_H(const Nonlinearity& nl, double s) {
    return -6.0 * nl.g(s) + s * nl.gp(s);
}

std::complex<double> eval_F_grad(const Nonlinearity& nl, std::complex<double> s) {
    double r = std::abs(s);
    if (r == 0.0) return {0.0, 0.0};
    return nl.gp(r) * (s / r);
}

namespace {

// One additive part of the cutoff splitting. sigma is piecewise linear:
// 1 on [-r1, r1], 0 outside [-r2, r2].
class SplitPart : public Nonlinearity {
public:
    SplitPart(std::shared_ptr<const Nonlinearity> base, double r1, double r2, bool inner)
        : base_(std::move(base)), r1_(r1), r2_(r2), inner_(inner) {}

    double sigma(double s) const {
        double a = std::abs(s);
        if (a <= r1_) return 1.0;
        if (a >= r2_) return 0.0;
        return (r2_ - a) / (r2_ - r1_);
    }

    double sigma_prime(double s) const {
        double a = std::abs(s);
        if (a <= r1_ || a >= r2_) return 0.0;
        return (s >= 0 ? -1.0 : 1.0) / (r2_ - r1_);
    }

    // G1(s) = int_0^s sigma G'; the ramp segment is integrated numerically.
    double g1(double s) const {
        double a = std::abs(s);
        if (a <= r1_) return base_->g(a);
        double hi = std::min(a, r2_);
        double ramp = adaptive_quad(
            [&](double t) { return sigma(t) * base_->gp(t); }, r1_, hi, 1e-12);
        return base_->g(r1_) + ramp;
    }

    double g(double s) const override {
        double v1 = g1(s);
        return inner_ ? v1 : base_->g(s) - v1;
    }

    double gp(double s) const override {
        double v1 = sigma(s) * base_->gp(s);
        return inner_ ? v1 : base_->gp(s) - v1;
    }

    double gpp(double s) const override {
        double v1 = sigma(s) * base_->gpp(s) + sigma_prime(s) * base_->gp(s);
        return inner_ ? v1 : base_->gpp(s) - v1;
    }

    bool has_gpp() const override { return base_->has_gpp(); }

    HypothesisParams params() const override {
        HypothesisParams par = base_->params();
        double c = std::pow(2.0, par.q - par.p + 1) * par.C;
        if (inner_) par.q = par.p;
        else par.p = par.q;
        par.C = c;
        return par;
    }

    std::string name() const override {
        return (inner_ ? "split_inner(" : "split_outer(") + base_->name() + ")";
    }

private:
    std::shared_ptr<const Nonlinearity> base_;
    double r1_, r2_;
    bool inner_;
};

} // namespace

std::pair<std::shared_ptr<const Nonlinearity>, std::shared_ptr<const Nonlinearity>>
split_g(std::shared_ptr<const Nonlinearity> base, double r1, double r2) {
    if (!(0 < r1 && r1 < r2))
        throw std::domain_error("split_g: requires 0 < r1 < r2");
    auto inner = std::make_shared<SplitPart>(base, r1, r2, true);
    auto outer = std::make_shared<SplitPart>(base, r1, r2, false);
    return {inner, outer};
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        default: return "not_checked";
    }
}

bool ConditionReport::all_pass() const {
    for (const ConditionResult* c : {&g1, &g2, &g3, &g4, &g5})
        if (c->verdict != Verdict::pass) return false;
    return true;
}

ConditionReport check_conditions(const CombinedPower& nl, double omega_lo,
                                 double omega_hi, int n_samples) {
    if (!(omega_lo > 0) || !(omega_hi >= omega_lo))
        throw std::invalid_argument("check_conditions: omega range must satisfy 0 < lo <= hi");
    if (n_samples < 2)
        throw std::invalid_argument("check_conditions: n_samples must be >= 2");

    ConditionReport rep;

    // (G1): search a logarithmic grid for a point where G < 0.
    {
        const int n_grid = 512;
        double best_s = 0, best_g = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n_grid; ++i) {
            double s = 1e-4 * std::pow(1e8, static_cast<double>(i) / (n_grid - 1));
            double gs = nl.g(s);
            if (gs < best_g) {
                best_g = gs;
                best_s = s;
            }
            if (gs < 0) break;
        }
        if (best_g < 0) {
            rep.g1.verdict = Verdict::pass;
            rep.g1.witness["s0"] = best_s;
            rep.g1.witness["G(s0)"] = best_g;
        } else {
            rep.g1.verdict = Verdict::fail;
            rep.g1.witness["min_G"] = best_g;
            rep.g1.witness["argmin_s"] = best_s;
            rep.g1.note = "G >= 0 on the search grid";
        }
    }

    // (G2): exponent inspection. The family realizes |G'| <= C(|s|^{p-1}+|s|^{q-1})
    // with C = max(ap, bq); the lower bound needs p_star = p in (2, 6).
    {
        rep.g2.verdict = Verdict::pass;
        if (!(nl.p() > 2 && nl.p() < 6)) {
            rep.g2.verdict = Verdict::fail;
            rep.g2.witness["p"] = nl.p();
            rep.g2.note = "exponent p outside (2, 6)";
        } else if (!(nl.q() >= nl.p()) || (nl.b() > 0 && !(nl.q() > nl.p()))) {
            rep.g2.verdict = Verdict::fail;
            rep.g2.witness["q"] = nl.q();
            rep.g2.note = "requires q > p for a genuine combined power";
        } else {
            rep.g2.witness["p"] = nl.p();
            rep.g2.witness["q"] = nl.q();
            rep.g2.witness["C"] = nl.params().C;
        }
    }

    // (G4): second-derivative growth bound, again by exponent inspection.
    {
        if (nl.p() > 2 && nl.q() > 2) {
            rep.g4.verdict = Verdict::pass;
            rep.g4.witness["C"] = std::max(nl.a() * nl.p() * (nl.p() - 1),
                                           nl.b() * nl.q() * (nl.q() - 1));
        } else {
            rep.g4.verdict = Verdict::fail;
            rep.g4.witness["p"] = nl.p();
            rep.g4.note = "|G''| bound needs p, q > 2";
        }
    }

    // Sample omega geometrically and locate R*(omega) where it exists.
    std::vector<double> omegas(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        double t = static_cast<double>(i) / (n_samples - 1);
        omegas[i] = omega_lo * std::pow(omega_hi / omega_lo, t);
    }
    std::vector<int> in_set(n_samples, 0);
    std::vector<double> rstars(n_samples, 0.0);
    int n_valid = 0;
    for (int i = 0; i < n_samples; ++i) {
        try {
            double rs = r_star(nl, omegas[i]);
            rstars[i] = rs;
            in_set[i] = eval_V_prime(nl, rs) > 0 ? 1 : 0;
            ++n_valid;
        } catch (const Error&) {
            in_set[i] = 0;
        }
    }

    if (n_valid == 0) {
        rep.g3.verdict = Verdict::not_checked;
        rep.g3.note = "R*(omega) does not exist anywhere in the omega range";
        rep.g5.verdict = Verdict::not_checked;
        rep.g5.note = rep.g3.note;
        return rep;
    }

    // (G3): L >= -tol * (1 + |s|^q) on (0, R*(omega)] for each valid sample.
    {
        const int n_s = 256;
        double min_l = std::numeric_limits<double>::infinity();
        double min_l_s = 0, min_l_omega = 0;
        bool ok = true;
        double viol_s = 0, viol_omega = 0, viol_l = 0;
        for (int i = 0; i < n_samples; ++i) {
            if (rstars[i] <= 0) continue;
            for (int k = 1; k <= n_s; ++k) {
                double s = rstars[i] * static_cast<double>(k) / n_s;
                double l = eval_L(nl, s);
                if (l < min_l) {
                    min_l = l;
                    min_l_s = s;
                    min_l_omega = omegas[i];
                }
                if (l < -1e-10 * (1.0 + pow_abs(s, nl.q()))) {
                    ok = false;
                    viol_s = s;
                    viol_omega = omegas[i];
                    viol_l = l;
                }
            }
        }
        rep.g3.verdict = ok ? Verdict::pass : Verdict::fail;
        rep.g3.witness["min_L"] = min_l;
        rep.g3.witness["argmin_s"] = min_l_s;
        rep.g3.witness["argmin_omega"] = min_l_omega;
        if (!ok) {
            rep.g3.witness["violation_s"] = viol_s;
            rep.g3.witness["violation_omega"] = viol_omega;
            rep.g3.witness["violation_L"] = viol_l;
        }
    }

    // (G5): the sampled set {omega : V'(R*(omega)) > 0} must be contiguous.
    {
        int first = -1, last = -1;
        bool contiguous = true;
        double gap_omega = 0;
        for (int i = 0; i < n_samples; ++i) {
            if (in_set[i]) {
                if (first < 0) first = i;
                if (last >= 0 && i > last + 1) {
                    contiguous = false;
                    gap_omega = omegas[last + 1];
                }
                last = i;
            }
        }
        if (first < 0) {
            rep.g5.verdict = Verdict::not_checked;
            rep.g5.note = "no sampled omega is in the admissible set";
        } else {
            rep.g5.verdict = contiguous ? Verdict::pass : Verdict::fail;
            rep.g5.witness["omega_lo_sampled"] = omega_lo;
            rep.g5.witness["omega_hi_sampled"] = omega_hi;
            rep.g5.witness["set_estimate_lo"] = omegas[first];
            rep.g5.witness["set_estimate_hi"] = omegas[last];
            if (!contiguous) rep.g5.witness["gap_at_omega"] = gap_omega;
        }
    }

    return rep;
}

} // namespace nlse
