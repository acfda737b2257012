#include "nlse/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nlse/fft.hpp"

namespace nlse {

namespace {

// In-place machinery shared by step() and evolve(); the linear multiplier is
// precomputed for a fixed dt.
struct Stepper {
    const Nonlinearity& nl;
    const Grid grid;
    double dt;
    const Fft& fft;
    std::vector<std::complex<double>> linear_phase;
    std::vector<std::complex<double>> work;

    Stepper(const Nonlinearity& nl_, const Grid& grid_, double dt_)
        : nl(nl_), grid(grid_), dt(dt_), fft(fft_for(grid_.n)), work(grid_.n) {
        linear_phase.resize(grid.n);
        for (int m = 0; m < grid.n; ++m) {
            double k = grid.wavenumber(m);
            linear_phase[m] = std::polar(1.0, -k * k * dt);
        }
    }

    void nonlinear_half(std::vector<std::complex<double>>& v) const {
        const double half = 0.5 * dt;
        for (auto& z : v) {
            double r = std::abs(z);
            if (r == 0.0) continue;
            z *= std::polar(1.0, -nl.phase_rate(r) * half);
        }
    }

    void advance(std::vector<std::complex<double>>& v) {
        nonlinear_half(v);
        fft.forward(v.data(), work.data());
        for (int m = 0; m < grid.n; ++m) work[m] *= linear_phase[m];
        fft.inverse(work.data(), v.data());
        nonlinear_half(v);
    }
};

double sup_norm(const std::vector<std::complex<double>>& v) {
    double s = 0.0;
    for (const auto& z : v) s = std::max(s, std::abs(z));
    return s;
}

} // namespace

ComplexField step(const ComplexField& u, double dt, const Nonlinearity& nl) {
    Stepper st(nl, u.grid, dt);
    ComplexField out = u;
    st.advance(out.v);
    return out;
}

EvolutionTrace evolve(const ComplexField& u0, const Nonlinearity& nl,
                      const EvolveConfig& cfg, const ProfileSolution* reference) {
    if (!(cfg.dt > 0)) throw std::invalid_argument("evolve: dt must be positive");
    if (!(cfg.T >= cfg.dt)) throw std::invalid_argument("evolve: T must be >= dt");
    if (reference && !(reference->grid == u0.grid))
        throw std::invalid_argument("evolve: reference profile grid mismatch");

    const long n_steps = std::lround(cfg.T / cfg.dt);
    Stepper st(nl, u0.grid, cfg.dt);
    ComplexField u = u0;

    EvolutionTrace trace;
    auto record = [&](long k) {
        trace.t.push_back(k * cfg.dt);
        trace.E.push_back(energy(u, nl));
        trace.M.push_back(mass(u));
        if (reference) trace.dist.push_back(orbit_distance(u, *reference).distance);
        if (cfg.record_fields) trace.fields.push_back(u);
    };

    record(0);
    for (long k = 1; k <= n_steps; ++k) {
        st.advance(u.v);
        if (sup_norm(u.v) > cfg.blowup_threshold) {
            trace.blowup = true;
            record(k);
            break;
        }
        if (k % cfg.record_every == 0 || k == n_steps) record(k);
    }
    trace.final_state = std::move(u);
    return trace;
}

namespace {

// Even H^1-normalized noise with decaying spectrum, deterministic per seed.
ComplexField even_noise(const Grid& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = grid.n;
    std::vector<std::complex<double>> modes(n, 0.0);
    const int m_max = std::min(n / 4, 64);
    for (int m = 0; m <= m_max; ++m) {
        double k = grid.wavenumber(m);
        double amp = 1.0 / (1.0 + k * k);
        double re = gauss(rng) * amp;
        double im = gauss(rng) * amp;
        modes[m] = {re, im};
        if (m > 0) modes[n - m] = modes[m]; // even symmetric spectrum
    }
    const Fft& fft = fft_for(n);
    ComplexField u{grid, fft.inverse(modes)};
    double nh = norm_h1(u);
    for (auto& z : u.v) z /= nh;
    return u;
}

} // namespace

StabilityReport stability_experiment(const Nonlinearity& nl, double lambda,
                                     const std::vector<Perturbation>& perturbations,
                                     double T, const Grid& grid, double dt,
                                     std::uint64_t seed) {
    double omega = omega_of_mass(nl, lambda);
    ProfileSolution prof = build_profile(nl, omega, 0.5 * grid.length, grid.n);
    ComplexField base = profile_field(prof);

    StabilityReport report;
    report.lambda = lambda;
    report.omega = omega;
    report.T = T;

    for (const Perturbation& pert : perturbations) {
        ComplexField u0 = base;
        if (pert.kind == "amplitude") {
            for (auto& z : u0.v) z *= (1.0 + pert.eps);
        } else if (pert.kind == "phase_ramp") {
            for (int j = 0; j < grid.n; ++j)
                u0.v[j] *= std::polar(1.0, pert.eps * grid.point(j));
        } else if (pert.kind == "noise") {
            ComplexField xi = even_noise(grid, seed);
            for (int j = 0; j < grid.n; ++j) u0.v[j] += pert.eps * xi.v[j];
        } else {
            throw std::invalid_argument("stability_experiment: unknown perturbation kind '" +
                                        pert.kind + "'");
        }

        EvolveConfig cfg;
        cfg.dt = dt;
        cfg.T = T;
        cfg.record_every = std::max(1, static_cast<int>(std::lround(0.05 / dt)));
        EvolutionTrace trace = evolve(u0, nl, cfg, &prof);

        StabilityEntry entry;
        entry.kind = pert.kind;
        entry.eps = pert.eps;
        entry.initial_dist = trace.dist.front();
        entry.sup_dist = *std::max_element(trace.dist.begin(), trace.dist.end());
        entry.ratio = entry.initial_dist > 1e-14
                          ? entry.sup_dist / entry.initial_dist
                          : std::numeric_limits<double>::quiet_NaN();
        entry.expected_growth = pert.kind == "phase_ramp";
        report.entries.push_back(entry);
    }
    return report;
}

} // namespace nlse
