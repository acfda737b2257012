#include "nlse/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlse/fft.hpp"

namespace nlse {

LPlusOperator::LPlusOperator(const ProfileSolution& R0, const Nonlinearity& nl,
                             Discretization disc)
    : grid_(R0.grid), omega_(R0.omega), disc_(disc) {
    if (!nl.has_gpp()) throw CapabilityError("LPlusOperator: requires G''");
    potential_.resize(grid_.n);
    for (int j = 0; j < grid_.n; ++j) potential_[j] = nl.gpp(R0.R[j]) + omega_;
}

RealField LPlusOperator::apply(const RealField& v) const {
    if (!(v.grid == grid_)) throw std::invalid_argument("LPlusOperator::apply: grid mismatch");
    const int n = grid_.n;
    RealField out{grid_, std::vector<double>(n)};
    if (disc_ == Discretization::spectral) {
        const Fft& fft = fft_for(n);
        std::vector<std::complex<double>> buf(n);
        for (int j = 0; j < n; ++j) buf[j] = v.v[j];
        auto V = fft.forward(buf);
        for (int m = 0; m < n; ++m) {
            double k = grid_.wavenumber(m);
            V[m] *= k * k;
        }
        auto lap = fft.inverse(V);
        for (int j = 0; j < n; ++j) out.v[j] = lap[j].real() + potential_[j] * v.v[j];
    } else {
        const double inv_h2 = 1.0 / (grid_.spacing() * grid_.spacing());
        for (int j = 0; j < n; ++j) {
            double vm = v.v[(j - 1 + n) % n], vp = v.v[(j + 1) % n];
            out.v[j] = (2.0 * v.v[j] - vm - vp) * inv_h2 + potential_[j] * v.v[j];
        }
    }
    return out;
}

LPlusOperator assemble(const ProfileSolution& R0, const Nonlinearity& nl, Discretization disc) {
    return LPlusOperator(R0, nl, disc);
}

double kernel_residual(const LPlusOperator& op, const ProfileSolution& R0) {
    RealField dr = profile_derivative(R0);
    RealField r = op.apply(dr);
    double num = 0, den = 0;
    for (int j = 0; j < op.grid().n; ++j) {
        num += r.v[j] * r.v[j];
        den += dr.v[j] * dr.v[j];
    }
    return std::sqrt(num / (den + 1e-300));
}

// ---------------------------------------------------------------------------
// Tridiagonal machinery on the parity-reduced interior problem.

namespace {

struct Tridiag {
    std::vector<double> d; // diagonal
    std::vector<double> e; // off-diagonal (size d.size() - 1)
};

// Dirichlet interior points are x_i = -X + (i+1)h, i = 0..n-2; the center
// x = 0 sits at i = n/2 - 1. Parity reduction gives, for even functions,
// coordinates (v_c, sqrt(2) v_{c+1}, ...) with a sqrt(2) first coupling.
Tridiag reduce(const LPlusOperator& op, Parity parity) {
    const int n = op.grid().n;
    const double h = op.grid().spacing();
    const double e = -1.0 / (h * h);
    const double d0 = 2.0 / (h * h);
    const int ic = n / 2 - 1; // interior index of x = 0
    auto dfull = [&](int i) { return d0 + op.potential()[i + 1]; };

    Tridiag t;
    if (parity == Parity::even) {
        const int m = n / 2;
        t.d.resize(m);
        t.e.resize(m - 1);
        t.d[0] = dfull(ic);
        t.e[0] = std::sqrt(2.0) * e;
        for (int j = 1; j < m; ++j) {
            t.d[j] = dfull(ic + j);
            if (j < m - 1) t.e[j] = e;
        }
    } else {
        const int m = n / 2 - 1;
        t.d.resize(m);
        t.e.resize(m - 1);
        for (int j = 0; j < m; ++j) {
            t.d[j] = dfull(ic + 1 + j);
            if (j < m - 1) t.e[j] = e;
        }
    }
    return t;
}

// Number of eigenvalues of T smaller than x (Sturm count).
int sturm_count(const Tridiag& t, double x) {
    int count = 0;
    double q = t.d[0] - x;
    if (q < 0) ++count;
    for (size_t i = 1; i < t.d.size(); ++i) {
        double e2 = t.e[i - 1] * t.e[i - 1];
        if (std::abs(q) < 1e-300) q = -1e-300;
        q = t.d[i] - x - e2 / q;
        if (q < 0) ++count;
    }
    return count;
}

// idx-th smallest eigenvalue (0-based) by bisection.
double sturm_eigenvalue(const Tridiag& t, int idx) {
    double lo = t.d[0], hi = t.d[0];
    for (size_t i = 0; i < t.d.size(); ++i) {
        double r = 0;
        if (i > 0) r += std::abs(t.e[i - 1]);
        if (i + 1 < t.d.size()) r += std::abs(t.e[i]);
        lo = std::min(lo, t.d[i] - r);
        hi = std::max(hi, t.d[i] + r);
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
        double mid = 0.5 * (lo + hi);
        if (sturm_count(t, mid) > idx)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Solves (T - mu) x = b by LU with partial pivoting (dgtsv-style).
std::vector<double> tridiag_solve_shifted(const Tridiag& t, double mu, std::vector<double> b) {
    const int n = static_cast<int>(t.d.size());
    std::vector<double> d(n), du(std::max(0, n - 1)), dl(std::max(0, n - 1)),
        du2(std::max(0, n - 2), 0.0);
    for (int i = 0; i < n; ++i) d[i] = t.d[i] - mu;
    for (int i = 0; i < n - 1; ++i) du[i] = dl[i] = t.e[i];

    for (int i = 0; i < n - 1; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) throw SingularSolveError("tridiagonal solve: zero pivot");
            double fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            if (i < n - 2) dl[i] = 0.0; // du2 slot stays zero
        } else {
            double fact = d[i] / dl[i];
            d[i] = dl[i];
            double tmp = d[i + 1];
            d[i + 1] = du[i] - fact * tmp;
            if (i < n - 2) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            du[i] = tmp;
            double tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i + 1];
        }
    }
    if (d[n - 1] == 0.0) throw SingularSolveError("tridiagonal solve: zero pivot");

    std::vector<double> x(n);
    x[n - 1] = b[n - 1] / d[n - 1];
    if (n > 1) x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    for (int i = n - 3; i >= 0; --i)
        x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    return x;
}

// Eigenvector by inverse iteration at a converged eigenvalue.
std::vector<double> inverse_iteration(const Tridiag& t, double eig) {
    const int n = static_cast<int>(t.d.size());
    std::vector<double> v(n, 1.0);
    // Deterministic non-symmetric seasoning so symmetric starts do not hide
    // sign structure.
    for (int i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * std::sin(1.0 + 7.0 * i);
    double shift = eig + 1e-10 * (1.0 + std::abs(eig));
    for (int it = 0; it < 5; ++it) {
        v = tridiag_solve_shifted(t, shift, std::move(v));
        double nrm = 0;
        for (double x : v) nrm += x * x;
        nrm = std::sqrt(nrm);
        if (!(nrm > 0) || !std::isfinite(nrm))
            throw Error("spectrum: inverse iteration failed at iteration " + std::to_string(it));
        for (double& x : v) x /= nrm;
    }
    return v;
}

// Expands parity-reduced coordinates onto the full periodic grid.
RealField expand(const Grid& grid, const std::vector<double>& w, Parity parity) {
    const int n = grid.n;
    RealField v{grid, std::vector<double>(n, 0.0)};
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    if (parity == Parity::even) {
        v.v[n / 2] = w[0];
        for (size_t j = 1; j < w.size(); ++j) {
            v.v[n / 2 + j] = w[j] * inv_sqrt2;
            v.v[n / 2 - j] = w[j] * inv_sqrt2;
        }
    } else {
        for (size_t j = 1; j <= w.size(); ++j) {
            v.v[n / 2 + j] = w[j - 1] * inv_sqrt2;
            v.v[n / 2 - j] = -w[j - 1] * inv_sqrt2;
        }
    }
    // L^2(h) normalization.
    double nrm = 0;
    for (double x : v.v) nrm += x * x;
    nrm = std::sqrt(nrm * grid.spacing());
    for (double& x : v.v) x /= nrm;
    return v;
}

double rayleigh(const LPlusOperator& op, const RealField& v) {
    RealField av = op.apply(v);
    double num = 0, den = 0;
    for (int j = 0; j < op.grid().n; ++j) {
        num += av.v[j] * v.v[j];
        den += v.v[j] * v.v[j];
    }
    return num / den;
}

std::vector<double> reduce_even_vector(const ProfileSolution& R0) {
    const int n = R0.grid.n;
    std::vector<double> r(n / 2);
    r[0] = R0.R[n / 2];
    for (int j = 1; j < n / 2; ++j) r[j] = std::sqrt(2.0) * R0.R[n / 2 + j];
    return r;
}

} // namespace

Spectrum spectrum(const LPlusOperator& op, int k, Parity parity) {
    if (k < 1) throw std::invalid_argument("spectrum: k must be >= 1");
    Spectrum out;
    auto run = [&](Parity par) {
        Tridiag t = reduce(op, par);
        int kk = std::min<int>(k, static_cast<int>(t.d.size()));
        for (int idx = 0; idx < kk; ++idx) {
            double eig = sturm_eigenvalue(t, idx);
            RealField v = expand(op.grid(), inverse_iteration(t, eig), par);
            double value = op.discretization() == Discretization::spectral
                               ? rayleigh(op, v)
                               : eig;
            out.values.push_back(value);
            out.vectors.push_back(std::move(v));
        }
    };
    if (parity == Parity::all) {
        run(Parity::even);
        run(Parity::odd);
        // interleave by value
        std::vector<size_t> order(out.values.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](size_t a, size_t b) { return out.values[a] < out.values[b]; });
        Spectrum merged;
        for (size_t i = 0; i < order.size() && i < static_cast<size_t>(k); ++i) {
            merged.values.push_back(out.values[order[i]]);
            merged.vectors.push_back(std::move(out.vectors[order[i]]));
        }
        return merged;
    }
    run(parity);
    return out;
}

SpectrumReport nondegeneracy_certificate(const LPlusOperator& op,
                                         const ProfileSolution& R0,
                                         const Nonlinearity& nl) {
    SpectrumReport rep;
    rep.omega = op.omega();

    Tridiag te = reduce(op, Parity::even);
    Tridiag to = reduce(op, Parity::odd);

    const int n_low = 6;
    std::vector<double> even_eigs(n_low);
    for (int i = 0; i < n_low; ++i) even_eigs[i] = sturm_eigenvalue(te, i);
    rep.lowest_even = even_eigs[0];
    rep.lowest_odd = sturm_eigenvalue(to, 0);
    rep.kernel_residual = kernel_residual(op, R0);

    double op_scale = 0;
    for (size_t i = 0; i < te.d.size(); ++i) op_scale = std::max(op_scale, std::abs(te.d[i]));
    for (double eig : even_eigs)
        if (std::abs(eig) < 1e-10 * op_scale)
            throw SingularSolveError("nondegeneracy_certificate: even-subspace operator is "
                                     "numerically singular");

    // (b) L+ w = R0 on the even subspace; <R0, w> should equal lambda'/2.
    std::vector<double> r = reduce_even_vector(R0);
    std::vector<double> w = tridiag_solve_shifted(te, 0.0, r);
    double inner = 0;
    for (size_t i = 0; i < r.size(); ++i) inner += r[i] * w[i];
    rep.resolvent_inner = inner * op.grid().spacing();
    rep.lambda_prime_half = 0.5 * mass_derivative(nl, op.omega());

    // (a) Constrained minimum of xi over even v with <v, R0> = 0: the smallest
    // root of g(mu) = <r, (T - mu)^{-1} r>, which interlaces the unconstrained
    // even eigenvalues.
    double rn = 0;
    for (double x : r) rn += x * x;
    rn = std::sqrt(rn);
    std::vector<double> rhat(r);
    for (double& x : rhat) x /= rn;
    auto secular = [&](double mu) {
        std::vector<double> x = tridiag_solve_shifted(te, mu, rhat);
        double s = 0;
        for (size_t i = 0; i < x.size(); ++i) s += rhat[i] * x[i];
        return s;
    };
    double root = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i + 1 < n_low; ++i) {
        double a = even_eigs[i], b = even_eigs[i + 1];
        double gap = b - a;
        if (!(gap > 0)) continue;
        double lo = a + 1e-6 * gap;
        double hi = b - 1e-6 * gap;
        double glo = secular(lo), ghi = secular(hi);
        if (!(glo < 0 && ghi > 0)) continue;
        for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(hi)); ++it) {
            double mid = 0.5 * (lo + hi);
            if (secular(mid) < 0)
                lo = mid;
            else
                hi = mid;
        }
        root = 0.5 * (lo + hi);
        break;
    }
    if (!std::isfinite(root))
        throw Error("nondegeneracy_certificate: constrained minimum not bracketed");
    rep.constrained_even_min = root;
    return rep;
}

} // namespace nlse
