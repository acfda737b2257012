#include "nlse/field.hpp"

#include <algorithm>
#include <cmath>

#include "nlse/fft.hpp"

namespace nlse {

namespace {

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
    if (!(a == b)) throw std::invalid_argument(std::string(where) + ": fields live on different grids");
}

} // namespace

ComplexField make_field(const Grid& grid,
                        const std::function<std::complex<double>(double)>& f) {
    ComplexField u{grid, std::vector<std::complex<double>>(grid.n)};
    for (int j = 0; j < grid.n; ++j) u.v[j] = f(grid.point(j));
    return u;
}

RealField make_real_field(const Grid& grid, const std::function<double(double)>& f) {
    RealField u{grid, std::vector<double>(grid.n)};
    for (int j = 0; j < grid.n; ++j) u.v[j] = f(grid.point(j));
    return u;
}

ComplexField to_complex(const RealField& f) {
    ComplexField u{f.grid, std::vector<std::complex<double>>(f.grid.n)};
    for (int j = 0; j < f.grid.n; ++j) u.v[j] = f.v[j];
    return u;
}

ComplexField profile_field(const ProfileSolution& prof) {
    ComplexField u{prof.grid, std::vector<std::complex<double>>(prof.grid.n)};
    for (int j = 0; j < prof.grid.n; ++j) u.v[j] = prof.R[j];
    return u;
}

RealField profile_real(const ProfileSolution& prof) {
    return RealField{prof.grid, prof.R};
}

RealField profile_derivative(const ProfileSolution& prof) {
    return RealField{prof.grid, prof.dR};
}

double mass(const ComplexField& u) {
    double s = 0.0;
    for (const auto& z : u.v) s += std::norm(z);
    return s * u.grid.spacing();
}

double norm_l2(const ComplexField& u) { return std::sqrt(mass(u)); }

double norm_lp_pow(const ComplexField& u, double d) {
    double s = 0.0;
    for (const auto& z : u.v) s += std::pow(std::abs(z), d);
    return s * u.grid.spacing();
}

std::complex<double> inner_l2(const ComplexField& u, const ComplexField& w) {
    require_same_grid(u.grid, w.grid, "inner_l2");
    std::complex<double> s = 0.0;
    for (int j = 0; j < u.grid.n; ++j) s += u.v[j] * std::conj(w.v[j]);
    return s * u.grid.spacing();
}

std::complex<double> inner_h1(const ComplexField& u, const ComplexField& w) {
    require_same_grid(u.grid, w.grid, "inner_h1");
    const Fft& fft = fft_for(u.grid.n);
    auto U = fft.forward(u.v);
    auto W = fft.forward(w.v);
    std::complex<double> s = 0.0;
    for (int m = 0; m < u.grid.n; ++m) {
        double k = u.grid.wavenumber(m);
        s += (1.0 + k * k) * U[m] * std::conj(W[m]);
    }
    return s * (u.grid.spacing() / u.grid.n);
}

double norm_h1(const ComplexField& u) {
    const Fft& fft = fft_for(u.grid.n);
    auto U = fft.forward(u.v);
    double s = 0.0;
    for (int m = 0; m < u.grid.n; ++m) {
        double k = u.grid.wavenumber(m);
        s += (1.0 + k * k) * std::norm(U[m]);
    }
    return std::sqrt(s * (u.grid.spacing() / u.grid.n));
}

double h1_distance(const ComplexField& u, const ComplexField& w) {
    require_same_grid(u.grid, w.grid, "h1_distance");
    ComplexField d{u.grid, std::vector<std::complex<double>>(u.grid.n)};
    for (int j = 0; j < u.grid.n; ++j) d.v[j] = u.v[j] - w.v[j];
    return norm_h1(d);
}

ComplexField spectral_derivative(const ComplexField& u) {
    const Fft& fft = fft_for(u.grid.n);
    auto U = fft.forward(u.v);
    const int n = u.grid.n;
    for (int m = 0; m < n; ++m) {
        if (m == n / 2) {
            U[m] = 0.0; // Nyquist mode has no well-defined odd derivative
            continue;
        }
        double k = u.grid.wavenumber(m);
        U[m] *= std::complex<double>(0.0, k);
    }
    return ComplexField{u.grid, fft.inverse(U)};
}

ComplexField translate(const ComplexField& u, double y) {
    const Fft& fft = fft_for(u.grid.n);
    auto U = fft.forward(u.v);
    for (int m = 0; m < u.grid.n; ++m) {
        double k = u.grid.wavenumber(m);
        U[m] *= std::polar(1.0, k * y);
    }
    return ComplexField{u.grid, fft.inverse(U)};
}

ComplexField scale_to_mass(const ComplexField& u, double lambda) {
    double m0 = mass(u);
    if (!(m0 > 0)) throw std::invalid_argument("scale_to_mass: zero field");
    double s = std::sqrt(lambda / m0);
    ComplexField out = u;
    for (auto& z : out.v) z *= s;
    return out;
}

double energy(const ComplexField& u, const Nonlinearity& nl) {
    ComplexField du = spectral_derivative(u);
    double grad = 0.0, nonlinear = 0.0;
    for (int j = 0; j < u.grid.n; ++j) {
        grad += std::norm(du.v[j]);
        nonlinear += nl.g(std::abs(u.v[j]));
    }
    return (0.5 * grad + nonlinear) * u.grid.spacing();
}

ComplexField energy_gradient(const ComplexField& u, const Nonlinearity& nl) {
    const Fft& fft = fft_for(u.grid.n);
    auto U = fft.forward(u.v);
    for (int m = 0; m < u.grid.n; ++m) {
        double k = u.grid.wavenumber(m);
        U[m] *= k * k; // -u''
    }
    ComplexField out{u.grid, fft.inverse(U)};
    for (int j = 0; j < u.grid.n; ++j) out.v[j] += eval_F_grad(nl, u.v[j]);
    return out;
}

double hessian_form(const RealField& v, const ProfileSolution& R0, const Nonlinearity& nl) {
    require_same_grid(v.grid, R0.grid, "hessian_form");
    if (!nl.has_gpp()) throw CapabilityError("hessian_form: requires G''");
    ComplexField vc = to_complex(v);
    ComplexField dv = spectral_derivative(vc);
    double s = 0.0;
    for (int j = 0; j < v.grid.n; ++j) {
        double w = nl.gpp(R0.R[j]) + R0.omega;
        s += std::norm(dv.v[j]) + w * v.v[j] * v.v[j];
    }
    return s * v.grid.spacing();
}

double vanishing_sup(const ComplexField& u) {
    const double half = 0.5 * u.grid.length;
    const int k_min = static_cast<int>(std::ceil(-half - 1e-12));
    const int k_max = static_cast<int>(std::floor(half + 1e-12)) - 1; // J_k = (k, k+1)
    if (k_max < k_min) return 0.0;
    std::vector<double> acc(k_max - k_min + 1, 0.0);
    const double h = u.grid.spacing();
    for (int j = 0; j < u.grid.n; ++j) {
        double x = u.grid.point(j);
        int k = static_cast<int>(std::floor(x));
        if (k < k_min || k > k_max) continue;
        acc[k - k_min] += std::norm(u.v[j]) * h;
    }
    double best = 0.0;
    for (double a : acc) best = std::max(best, a);
    return std::sqrt(best);
}

double vanishing_bound(const ComplexField& u, double d, double s_const) {
    if (d < 2) throw std::invalid_argument("vanishing_bound: requires d >= 2");
    double sup = vanishing_sup(u);
    double h1 = norm_h1(u);
    if (d >= 6)
        return std::pow(s_const, d) * std::pow(sup, d - 2) * h1 * h1;
    return std::pow(s_const, d) * std::pow(sup, 0.5 * (d + 2)) * std::pow(h1, 0.5 * (d - 2));
}

bool verify_vanishing_inequality(const ComplexField& u, double d, double s_const) {
    double lhs = norm_lp_pow(u, d);
    double rhs = vanishing_bound(u, d, s_const);
    return lhs <= rhs * (1.0 + 1e-12) + 1e-300;
}

OrbitDistanceResult orbit_distance(const ComplexField& u, const ProfileSolution& R) {
    require_same_grid(u.grid, R.grid, "orbit_distance");
    const int n = u.grid.n;
    const Fft& fft = fft_for(n);

    ComplexField rf = profile_field(R);
    auto U = fft.forward(u.v);
    auto RF = fft.forward(rf.v);

    // c(y) = <u, R(. - y)>_H1 evaluated at all grid shifts at once.
    std::vector<std::complex<double>> A(n);
    for (int m = 0; m < n; ++m) {
        double k = u.grid.wavenumber(m);
        A[m] = (1.0 + k * k) * U[m] * std::conj(RF[m]);
    }
    auto c = fft.inverse(A);
    const double h = u.grid.spacing();
    for (auto& z : c) z *= h; // c[j] = <u, R(. - j h)>_H1

    int j_best = 0;
    double best = -1.0;
    for (int j = 0; j < n; ++j) {
        double a = std::abs(c[j]);
        if (a > best) {
            best = a;
            j_best = j;
        }
    }

    // Parabolic refinement of |c| around the best grid shift.
    double am = std::abs(c[(j_best - 1 + n) % n]);
    double a0 = std::abs(c[j_best]);
    double ap = std::abs(c[(j_best + 1) % n]);
    double denom = am - 2.0 * a0 + ap;
    double delta = std::abs(denom) > 1e-300 ? 0.5 * (am - ap) / denom : 0.0;
    delta = std::clamp(delta, -0.5, 0.5);

    double y = (j_best + delta) * h;
    std::complex<double> c_ref = 0.0;
    for (int m = 0; m < n; ++m) {
        double k = u.grid.wavenumber(m);
        c_ref += A[m] * std::polar(1.0, k * y);
    }
    c_ref *= h / n;

    std::complex<double> c_opt = c[j_best];
    double y_opt = j_best * h;
    if (std::abs(c_ref) > std::abs(c_opt)) {
        c_opt = c_ref;
        y_opt = y;
    }
    if (y_opt > 0.5 * u.grid.length) y_opt -= u.grid.length;

    double nu = norm_h1(u);
    double nr = norm_h1(rf);
    OrbitDistanceResult res;
    res.shift = y_opt;
    double d2 = nu * nu + nr * nr - 2.0 * std::abs(c_opt);
    res.distance = std::sqrt(std::max(0.0, d2));
    if (std::abs(c_opt) < 1e-12 * nu * nr) {
        res.phase = 1.0;
        res.degenerate_phase = true;
    } else {
        res.phase = c_opt / std::abs(c_opt);
    }
    return res;
}

RecenterResult recenter_align(const ComplexField& u) {
    const int n = u.grid.n;
    double nrm = norm_l2(u);
    if (!(nrm > 0)) throw std::invalid_argument("recenter_align: zero field");

    int j_best = 0;
    double best = -1.0;
    for (int j = 0; j < n; ++j) {
        double a = std::abs(u.v[j]);
        if (a > best) {
            best = a;
            j_best = j;
        }
    }
    double am = std::abs(u.v[(j_best - 1 + n) % n]);
    double a0 = std::abs(u.v[j_best]);
    double ap = std::abs(u.v[(j_best + 1) % n]);
    double denom = am - 2.0 * a0 + ap;
    double delta = std::abs(denom) > 1e-300 ? 0.5 * (am - ap) / denom : 0.0;
    delta = std::clamp(delta, -0.5, 0.5);

    double y = u.grid.point(j_best) + delta * u.grid.spacing();
    ComplexField centered = translate(u, y); // peak moved to x = 0

    std::complex<double> peak = centered.v[n / 2];
    std::complex<double> z = std::abs(peak) > 1e-300 ? peak / std::abs(peak)
                                                     : std::complex<double>(1.0, 0.0);

    RecenterResult res;
    res.shift = y;
    res.phase = z;
    res.field = RealField{u.grid, std::vector<double>(n)};
    double im2 = 0.0;
    for (int j = 0; j < n; ++j) {
        std::complex<double> w = centered.v[j] / z;
        res.field.v[j] = w.real();
        im2 += w.imag() * w.imag();
    }
    res.residual = std::sqrt(im2 * u.grid.spacing()) / nrm;
    return res;
}

} // namespace nlse
