#include "nlse/minimize.hpp"

#include <algorithm>
#include <cmath>

#include "nlse/fft.hpp"

namespace nlse {

std::string to_string(MinimizeStatus s) {
    switch (s) {
        case MinimizeStatus::converged: return "converged";
        case MinimizeStatus::no_descent: return "no_descent";
        default: return "max_iterations";
    }
}

namespace {

ComplexField h1_precondition(const ComplexField& g) {
    const Fft& fft = fft_for(g.grid.n);
    auto G = fft.forward(g.v);
    for (int m = 0; m < g.grid.n; ++m) {
        double k = g.grid.wavenumber(m);
        G[m] /= (1.0 + k * k);
    }
    return ComplexField{g.grid, fft.inverse(G)};
}

struct DescentOutcome {
    ComplexField u;
    double E = 0;
    int iterations = 0;
    bool converged = false;
};

DescentOutcome descend(const Nonlinearity& nl, double lambda, ComplexField u,
                       const MinimizeOptions& opts) {
    const Grid& grid = u.grid;
    const double h = grid.spacing();
    u = scale_to_mass(u, lambda);

    double tau = opts.tau0 > 0 ? opts.tau0 : (opts.precondition ? 0.5 : 0.1 * h * h);
    const double tau_max = opts.precondition ? 8.0 : 0.5 * h * h;
    double E = energy(u, nl);

    DescentOutcome out;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        ComplexField grad = energy_gradient(u, nl);
        // Projected gradient: remove the component along u (the raw gradient
        // does not vanish on the constraint manifold).
        std::complex<double> gu = inner_l2(grad, u);
        double coef = gu.real() / lambda;
        double pg2 = 0.0;
        for (int j = 0; j < grid.n; ++j) {
            std::complex<double> pg = grad.v[j] - coef * u.v[j];
            pg2 += std::norm(pg);
        }
        double pg_norm = std::sqrt(pg2 * h);
        if (pg_norm < opts.grad_tol) {
            out.converged = true;
            break;
        }

        ComplexField dir = opts.precondition ? h1_precondition(grad) : grad;

        bool accepted = false;
        while (tau > 1e-14) {
            ComplexField cand{grid, std::vector<std::complex<double>>(grid.n)};
            for (int j = 0; j < grid.n; ++j) cand.v[j] = u.v[j] - tau * dir.v[j];
            cand = scale_to_mass(cand, lambda);
            double Ec = energy(cand, nl);
            if (Ec <= E) {
                u = std::move(cand);
                E = Ec;
                tau = std::min(tau * 1.1, tau_max);
                accepted = true;
                break;
            }
            tau *= 0.5;
        }
        if (!accepted) break; // stalled: no decrease possible at any step size
    }
    out.u = std::move(u);
    out.E = E;
    out.iterations = it;
    return out;
}

ComplexField gaussian_init(const Grid& grid, double lambda) {
    ComplexField u = make_field(grid, [](double x) {
        return std::complex<double>(std::exp(-0.5 * x * x), 0.0);
    });
    return scale_to_mass(u, lambda);
}

} // namespace

MinimizeResult minimize_energy(const Nonlinearity& nl, double lambda,
                               const Grid& grid, const MinimizeOptions& opts) {
    if (!(lambda > 0)) throw std::invalid_argument("minimize_energy: lambda must be positive");

    // Initialization portfolio, tried in order until descent reaches a
    // negative energy: explicit warm start, Gaussian bump, profile guess.
    std::vector<ComplexField> inits;
    if (opts.warm_start) {
        if (!(opts.warm_start->grid == grid))
            throw std::invalid_argument("minimize_energy: warm start grid mismatch");
        inits.push_back(*opts.warm_start);
    }
    inits.push_back(gaussian_init(grid, lambda));
    if (opts.allow_profile_init) {
        try {
            double om = omega_of_mass(nl, lambda);
            ProfileSolution prof = build_profile(nl, om, 0.5 * grid.length, grid.n);
            inits.push_back(profile_field(prof));
        } catch (const Error&) {
            // no admissible profile at this mass; skip this initialization
        }
    }

    DescentOutcome best;
    bool have = false;
    for (const ComplexField& u0 : inits) {
        DescentOutcome res = descend(nl, lambda, u0, opts);
        if (!have || res.E < best.E) {
            best = std::move(res);
            have = true;
        }
        if (best.converged && best.E < -1e-9) break;
    }

    // Align to the positive representative.
    RecenterResult rec = recenter_align(best.u);
    ComplexField aligned = to_complex(rec.field);
    aligned = scale_to_mass(aligned, lambda);

    MinimizeResult out;
    out.u = aligned;
    out.I_value = energy(aligned, nl);
    out.iterations = best.iterations;

    // omega from the Euler-Lagrange pairing.
    ComplexField du = spectral_derivative(aligned);
    double kin = mass(du);
    ComplexField fgrad{grid, std::vector<std::complex<double>>(grid.n)};
    for (int j = 0; j < grid.n; ++j) fgrad.v[j] = eval_F_grad(nl, aligned.v[j]);
    double pairing = inner_l2(fgrad, aligned).real();
    out.omega = -(kin + pairing) / lambda;

    ComplexField grad = energy_gradient(aligned, nl);
    double r2 = 0.0;
    for (int j = 0; j < grid.n; ++j) r2 += std::norm(grad.v[j] + out.omega * aligned.v[j]);
    out.residual = std::sqrt(r2 * grid.spacing());

    if (best.converged)
        out.status = out.I_value < -1e-9 ? MinimizeStatus::converged : MinimizeStatus::no_descent;
    else if (out.I_value > -1e-9)
        out.status = MinimizeStatus::no_descent;
    else
        out.status = MinimizeStatus::max_iterations;
    return out;
}

ICurve i_curve(const Nonlinearity& nl, const std::vector<double>& lambdas,
               const Grid& grid, const MinimizeOptions& opts) {
    for (double l : lambdas)
        if (!(l > 0)) throw std::invalid_argument("i_curve: lambda samples must be positive");

    ICurve curve;
    MinimizeOptions per = opts;
    std::optional<ComplexField> prev;
    for (double lambda : lambdas) {
        per.warm_start = prev;
        if (prev) per.warm_start = scale_to_mass(*prev, lambda);
        MinimizeResult res = minimize_energy(nl, lambda, grid, per);
        curve.lambda.push_back(lambda);
        curve.I.push_back(res.I_value);
        curve.omega.push_back(res.omega);
        curve.residual.push_back(res.residual);
        curve.iterations.push_back(res.iterations);
        curve.status.push_back(res.status);
        if (res.status != MinimizeStatus::no_descent) prev = res.u;
    }
    curve.lambda_star_estimate = 0.0;
    for (size_t i = 0; i < curve.lambda.size(); ++i)
        if (std::abs(curve.I[i]) < 1e-6)
            curve.lambda_star_estimate = std::max(curve.lambda_star_estimate, curve.lambda[i]);
    return curve;
}

double existence_identity_defect(const MinimizeResult& res, const Nonlinearity&) {
    ComplexField du = spectral_derivative(res.u);
    double kin = mass(du);
    double lambda = mass(res.u);
    double lhs = 2.0 * (kin - res.I_value);
    double rhs = res.omega * lambda;
    return std::abs(lhs - rhs) / (std::abs(res.omega) * lambda + 1e-300);
}

double cross_validate(const MinimizeResult& res, const Nonlinearity& nl) {
    if (!(res.omega > 0))
        throw std::invalid_argument("cross_validate: requires a positive extracted omega");
    ProfileSolution prof = build_profile(nl, res.omega, 0.5 * res.u.grid.length, res.u.grid.n);
    RecenterResult rec = recenter_align(res.u);
    ComplexField aligned = to_complex(rec.field);
    ComplexField rfield = profile_field(prof);
    return h1_distance(aligned, rfield) / norm_h1(rfield);
}

} // namespace nlse
