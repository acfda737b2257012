#include "nlse/profile.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "nlse/quadrature.hpp"

namespace nlse {

namespace {

// Scan upper bound for the first root of Q. For a combined power the first
// root is below the scale where the defocusing term takes over.
double scan_upper_bound(const Nonlinearity& nl) {
    if (const auto* cp = dynamic_cast<const CombinedPower*>(&nl)) {
        if (cp->b() > 0 && cp->q() > cp->p())
            return std::max(1e3, 10.0 * std::pow(cp->a() / cp->b(), 1.0 / (cp->q() - cp->p())));
    }
    return 1e3;
}

double transversality_scale(const Nonlinearity& nl, double omega, double s) {
    return 2.0 * omega * s + 2.0 * std::abs(nl.gp(s)) + 1e-300;
}

} // namespace

double r_star(const Nonlinearity& nl, double omega) {
    if (!(omega > 0)) throw std::invalid_argument("r_star: omega must be positive");
    const double s_lo = 1e-6, s_hi = scan_upper_bound(nl);
    const int n_scan = 512;

    // Geometric scan for the first sign change; Q > 0 near 0 since p > 2.
    double prev_s = s_lo, prev_q = eval_Q(nl, omega, s_lo);
    double a = 0, b = 0;
    for (int i = 1; i < n_scan; ++i) {
        double s = s_lo * std::pow(s_hi / s_lo, static_cast<double>(i) / (n_scan - 1));
        double q = eval_Q(nl, omega, s);
        if (prev_q > 0 && q <= 0) {
            a = prev_s;
            b = s;
            break;
        }
        prev_s = s;
        prev_q = q;
    }
    if (b == 0)
        throw NoRootError("r_star: Q(omega, s) has no zero on the scan range (omega outside the admissible set)");

    for (int it = 0; it < 200 && (b - a) > 1e-15 * b; ++it) {
        double mid = 0.5 * (a + b);
        if (eval_Q(nl, omega, mid) > 0)
            a = mid;
        else
            b = mid;
    }
    double rs = 0.5 * (a + b);

    double qs = eval_Q_ds(nl, omega, rs);
    if (std::abs(qs) < 1e-8 * transversality_scale(nl, omega, rs) || qs > 0)
        throw DegenerateError("r_star: tangential first zero of Q (dQ/ds ~ 0)");
    return rs;
}

double r_star_derivative(const Nonlinearity& nl, double omega) {
    double rs = r_star(nl, omega);
    double denom = 2.0 * nl.gp(rs) + 2.0 * omega * rs; // = dQ/ds at R*
    if (std::abs(denom) < 1e-8 * transversality_scale(nl, omega, rs))
        throw DegenerateError("r_star_derivative: degenerate denominator");
    return -rs * rs / denom;
}

double psi(const Nonlinearity& nl, double theta, double s, double omega) {
    if (!(s > 0)) throw std::invalid_argument("psi: requires s > 0");
    double s2 = s * s, s4 = s2 * s2;
    return omega * theta * theta / s4 + 2.0 * nl.g(s * theta) / (s4 * s2);
}

namespace {

// I(omega, theta) with R* already known.
double capital_i_known(const Nonlinearity& nl, double rs, double theta) {
    return 2.0 * eval_H(nl, rs * theta) - 2.0 * theta * theta * eval_H(nl, rs);
}

// -d(Psi)/d(theta) at theta = 1, s = R*: equals -Q_s(omega, R*)/R*^5 > 0.
double psi_slope_at_one(const Nonlinearity& nl, double omega, double rs) {
    double s5 = rs * rs * rs * rs * rs;
    return -eval_Q_ds(nl, omega, rs) / s5;
}

double mass_integral(const Nonlinearity& nl, double omega, double rs) {
    double slope = psi_slope_at_one(nl, omega, rs);
    auto f = [&](double tau) {
        if (tau < 1e-7) return 4.0 / std::sqrt(slope);
        double theta = 1.0 - tau * tau;
        double ps = psi(nl, theta, rs, omega);
        if (!(ps > 0) || !std::isfinite(ps))
            throw QuadratureError("mass_of_omega: Psi not positive inside (0,1) "
                                  "(interior zero; R* is not the first root?)");
        return 4.0 * tau * theta * theta / std::sqrt(ps);
    };
    return adaptive_quad(f, 0.0, 1.0, 1e-9, 48);
}

} // namespace

double capital_i(const Nonlinearity& nl, double omega, double theta) {
    return capital_i_known(nl, r_star(nl, omega), theta);
}

double dpsi_domega(const Nonlinearity& nl, double omega, double theta) {
    double rs = r_star(nl, omega);
    double rp = r_star_derivative(nl, omega);
    double r4 = rs * rs * rs * rs, r5 = r4 * rs, r6 = r5 * rs, r7 = r6 * rs;
    double t2 = theta * theta;
    return t2 / r4 +
           (-4.0 * omega * t2 / r5 - 12.0 * nl.g(rs * theta) / r7 +
            2.0 * theta * nl.gp(rs * theta) / r6) * rp;
}

double mass_of_omega(const Nonlinearity& nl, double omega) {
    double rs = r_star(nl, omega);
    return mass_integral(nl, omega, rs);
}

double mass_derivative(const Nonlinearity& nl, double omega) {
    if (!nl.has_gpp())
        throw CapabilityError("mass_derivative: requires G''");
    double rs = r_star(nl, omega);
    double rp = r_star_derivative(nl, omega);
    double slope = psi_slope_at_one(nl, omega, rs);

    // dH/ds = -5G' + sG''; I'(theta=1) feeds the cancelled endpoint limit.
    double hp_rs = -5.0 * nl.gp(rs) + rs * nl.gpp(rs);
    double i_prime_one = 2.0 * rs * hp_rs - 4.0 * eval_H(nl, rs);

    auto f = [&](double tau) {
        if (tau < 1e-6) return -2.0 * i_prime_one / std::pow(slope, 1.5);
        double theta = 1.0 - tau * tau;
        double ps = psi(nl, theta, rs, omega);
        if (!(ps > 0) || !std::isfinite(ps))
            throw QuadratureError("mass_derivative: Psi not positive inside (0,1)");
        return 2.0 * tau * theta * theta * capital_i_known(nl, rs, theta) / std::pow(ps, 1.5);
    };
    double integral = -(rp / std::pow(rs, 7)) * adaptive_quad(f, 0.0, 1.0, 1e-9, 48);

    // Independent route: central finite difference of the mass quadrature.
    double delta = 1e-3 * omega;
    double fd = (mass_of_omega(nl, omega + delta) - mass_of_omega(nl, omega - delta)) / (2.0 * delta);
    double tol = 1e-4 * std::max({1.0, std::abs(integral), std::abs(fd)});
    if (std::abs(integral - fd) > tol)
        throw ConsistencyError("mass_derivative: quadrature and finite-difference values disagree");
    return integral;
}

// ---------------------------------------------------------------------------
// Profile construction by shooting.

namespace {

enum class ShotOutcome { pending, clamped, reached_end, turned_up, crossed_zero };

struct Shot {
    ShotOutcome outcome = ShotOutcome::pending;
    std::vector<double> R;  // values at grid nodes x_k = k h, k = 0..n_half
    std::vector<double> dR;
    long double min_R = 0;
};

// Integrates the IVP R'' = G'(R) + omega R from (R0, 0) across n_half grid
// intervals of width h with m RK4 substeps each, in extended precision.
// record = false stops as soon as the outcome is known.
Shot shoot(const Nonlinearity& nl, double omega, long double R0, double h,
           int n_half, int m, double clamp_threshold, bool record) {
    Shot shot;
    const long double w = omega;
    const long double sqw = sqrtl(w);
    auto acc = [&](long double r) { return nl.gp_l(r) + w * r; };

    if (record) {
        shot.R.assign(n_half + 1, 0.0);
        shot.dR.assign(n_half + 1, 0.0);
    }

    long double R = R0, P = 0.0L;
    long double hs = static_cast<long double>(h) / m;
    shot.min_R = R;
    if (record) {
        shot.R[0] = static_cast<double>(R);
        shot.dR[0] = 0.0;
    }

    bool first_substep = true;
    for (int k = 1; k <= n_half && shot.outcome == ShotOutcome::pending; ++k) {
        for (int s = 0; s < m; ++s) {
            if (first_substep) {
                // Taylor start: R'(0) = 0, odd derivatives vanish by symmetry.
                long double r2 = acc(R0);
                long double r4 = nl.has_gpp()
                                     ? (static_cast<long double>(nl.gpp(static_cast<double>(R0))) + w) * r2
                                     : 0.0L;
                R = R0 + 0.5L * r2 * hs * hs + r4 * hs * hs * hs * hs / 24.0L;
                P = r2 * hs + r4 * hs * hs * hs / 6.0L;
                first_substep = false;
            } else {
                long double k1r = P, k1p = acc(R);
                long double k2r = P + 0.5L * hs * k1p, k2p = acc(R + 0.5L * hs * k1r);
                long double k3r = P + 0.5L * hs * k2p, k3p = acc(R + 0.5L * hs * k2r);
                long double k4r = P + hs * k3p, k4p = acc(R + hs * k3r);
                R += hs / 6.0L * (k1r + 2.0L * k2r + 2.0L * k3r + k4r);
                P += hs / 6.0L * (k1p + 2.0L * k2p + 2.0L * k3p + k4p);
            }
            shot.min_R = std::min(shot.min_R, R);
            if (R <= 0.0L) {
                shot.outcome = ShotOutcome::crossed_zero;
                break;
            }
            if (R < static_cast<long double>(clamp_threshold)) {
                // Tail is pure exponential from here on.
                if (record) {
                    long double x_c = (static_cast<long double>(k - 1) + (s + 1) / static_cast<long double>(m)) * h;
                    for (int j = k; j <= n_half; ++j) {
                        long double x = static_cast<long double>(j) * h;
                        long double val = R * expl(-sqw * (x - x_c));
                        shot.R[j] = static_cast<double>(val);
                        shot.dR[j] = static_cast<double>(-sqw * val);
                    }
                }
                shot.outcome = ShotOutcome::clamped;
                break;
            }
            if (P > 0.0L) {
                shot.outcome = ShotOutcome::turned_up;
                break;
            }
        }
        if (shot.outcome == ShotOutcome::pending && record) {
            shot.R[k] = static_cast<double>(R);
            shot.dR[k] = static_cast<double>(P);
        }
    }
    if (shot.outcome == ShotOutcome::pending) shot.outcome = ShotOutcome::reached_end;
    return shot;
}

} // namespace

ProfileSolution build_profile(const Nonlinearity& nl, double omega,
                              double half_width, int n, ProfileOptions opts) {
    if (!(half_width > 0)) throw std::invalid_argument("build_profile: half_width must be positive");
    Grid grid(2.0 * half_width, n);
    const int n_half = n / 2;
    const double h = grid.spacing();
    int m = opts.substeps;
    if (m <= 0)
        m = std::max(1, static_cast<int>(std::ceil(h / (0.005 / std::max(1.0, std::sqrt(omega))))));

    const double rs = r_star(nl, omega); // validates transversality

    auto outcome_of = [&](long double R0) {
        return shoot(nl, omega, R0, h, n_half, m, opts.clamp_threshold, false).outcome;
    };

    // Bracket the connecting amplitude: too low turns back up, too high
    // crosses zero. Bisect in extended precision until the trajectory decays
    // into the clamp region.
    long double center = rs;
    long double lo = 0, hi = 0;
    ShotOutcome oc = outcome_of(center);
    bool done = (oc == ShotOutcome::clamped || oc == ShotOutcome::reached_end);
    long double chosen = center;
    if (!done) {
        if (oc == ShotOutcome::turned_up) lo = center;
        else hi = center;
        long double delta = 1e-13L * center;
        for (int it = 0; it < 60 && (lo == 0 || hi == 0); ++it) {
            long double probe = (lo == 0) ? center - delta : center + delta;
            ShotOutcome po = outcome_of(probe);
            if (po == ShotOutcome::clamped || po == ShotOutcome::reached_end) {
                chosen = probe;
                done = true;
                break;
            }
            if (po == ShotOutcome::turned_up && lo == 0) lo = probe;
            else if (po == ShotOutcome::crossed_zero && hi == 0) hi = probe;
            else delta *= 4.0L;
            if (delta > 1e-6L * center)
                throw TailBlowupError("build_profile: cannot bracket the connecting amplitude");
        }
        while (!done && hi - lo > 1e-19L * center) {
            long double mid = 0.5L * (lo + hi);
            ShotOutcome mo = outcome_of(mid);
            if (mo == ShotOutcome::clamped || mo == ShotOutcome::reached_end) {
                chosen = mid;
                done = true;
            } else if (mo == ShotOutcome::turned_up) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if (!done) chosen = 0.5L * (lo + hi);
    }

    Shot best = shoot(nl, omega, chosen, h, n_half, m, opts.clamp_threshold, true);
    if (best.outcome == ShotOutcome::turned_up || best.outcome == ShotOutcome::crossed_zero) {
        // Deviation in the deep tail is acceptable: clamp from the smallest
        // recorded value instead.
        if (!(best.min_R > 0) || best.min_R > 1e-6L)
            throw TailBlowupError("build_profile: trajectory left the decay regime before the tail "
                                  "(omega not admissible or step too coarse)");
        int k_min = 0;
        double r_min = std::numeric_limits<double>::infinity();
        for (int k2 = 0; k2 <= n_half; ++k2) {
            if (best.R[k2] > 0 && best.R[k2] < r_min) {
                r_min = best.R[k2];
                k_min = k2;
            }
        }
        double sqw = std::sqrt(omega);
        for (int k2 = k_min; k2 <= n_half; ++k2) {
            best.R[k2] = r_min * std::exp(-sqw * (k2 - k_min) * h);
            best.dR[k2] = -sqw * best.R[k2];
        }
    }

    ProfileSolution prof;
    prof.omega = omega;
    prof.r_star = static_cast<double>(chosen);
    prof.grid = grid;
    prof.R.assign(n, 0.0);
    prof.dR.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        int k = std::abs(j - n_half);
        prof.R[j] = best.R[k];
        prof.dR[j] = (j >= n_half) ? best.dR[k] : -best.dR[k];
    }
    prof.tail_value = best.R[n_half];

    double defect = 0.0;
    for (int k = 0; k <= n_half; ++k)
        defect = std::max(defect, std::abs(best.dR[k] * best.dR[k] -
                                           eval_Q(nl, omega, best.R[k])));
    prof.first_integral_defect = defect;
    return prof;
}

ProfileSolution build_profile(const Nonlinearity& nl, double omega) {
    double X = std::max(20.0, 12.0 / std::sqrt(omega));
    return build_profile(nl, omega, X, 4096);
}

double profile_discrete_mass(const ProfileSolution& prof) {
    double s = 0.0;
    for (double r : prof.R) s += r * r;
    return s * prof.grid.spacing();
}

MassCurve mass_curve(const Nonlinearity& nl, const std::vector<double>& omegas, int jobs) {
    struct Row {
        bool valid = false;
        double omega = 0, lambda = 0, dlambda = 0;
        std::string method;
    };
    std::vector<Row> rows(omegas.size());

    auto work = [&](size_t i) {
        Row& r = rows[i];
        r.omega = omegas[i];
        try {
            r.lambda = mass_of_omega(nl, omegas[i]);
            if (nl.has_gpp()) {
                r.dlambda = mass_derivative(nl, omegas[i]);
                r.method = "integral";
            } else {
                double delta = 1e-3 * omegas[i];
                r.dlambda = (mass_of_omega(nl, omegas[i] + delta) -
                             mass_of_omega(nl, omegas[i] - delta)) / (2.0 * delta);
                r.method = "finite_difference";
            }
            r.valid = true;
        } catch (const Error&) {
            r.valid = false;
        }
    };

    if (jobs <= 1) {
        for (size_t i = 0; i < omegas.size(); ++i) work(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        int n_threads = std::min<int>(jobs, static_cast<int>(omegas.size()));
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < omegas.size(); i = next.fetch_add(1))
                    work(i);
            });
        for (auto& th : pool) th.join();
    }

    MassCurve curve;
    for (const Row& r : rows) {
        if (!r.valid) continue;
        curve.omega.push_back(r.omega);
        curve.lambda.push_back(r.lambda);
        curve.dlambda.push_back(r.dlambda);
        curve.method.push_back(r.method);
    }
    return curve;
}

double omega_of_mass(const Nonlinearity& nl, double lambda) {
    if (!(lambda > 0)) throw std::invalid_argument("omega_of_mass: lambda must be positive");
    const int n_scan = 81;
    double prev_omega = 0, prev_diff = 0;
    bool have_prev = false;
    double a = 0, b = 0;
    for (int i = 0; i < n_scan; ++i) {
        double om = 1e-4 * std::pow(1e8, static_cast<double>(i) / (n_scan - 1));
        double diff;
        try {
            diff = mass_of_omega(nl, om) - lambda;
        } catch (const Error&) {
            have_prev = false;
            continue;
        }
        if (diff == 0) return om;
        if (have_prev && prev_diff < 0 && diff > 0) {
            a = prev_omega;
            b = om;
            break;
        }
        prev_omega = om;
        prev_diff = diff;
        have_prev = true;
    }
    if (b == 0)
        throw NoRootError("omega_of_mass: lambda not attained on the omega scan range");
    for (int it = 0; it < 100 && (b - a) > 1e-13 * b; ++it) {
        double mid = 0.5 * (a + b);
        if (mass_of_omega(nl, mid) - lambda < 0)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

} // namespace nlse
