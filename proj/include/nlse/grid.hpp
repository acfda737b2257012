#pragma once

#include <stdexcept>
#include <vector>

namespace nlse {

/// Uniform periodic grid on [-L/2, L/2): n samples, x_j = -L/2 + j h.
/// n must be a power of two (>= 16) so transforms stay radix-2 friendly.
struct Grid {
    double length = 0;
    int n = 0;

    Grid() = default;
    Grid(double length_, int n_) : length(length_), n(n_) {
        if (!(length > 0)) throw std::invalid_argument("Grid: length must be positive");
        if (n < 16 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Grid: n must be a power of two >= 16");
    }

    double spacing() const { return length / n; }

    double point(int j) const { return -0.5 * length + j * spacing(); }

    std::vector<double> points() const {
        std::vector<double> x(n);
        for (int j = 0; j < n; ++j) x[j] = point(j);
        return x;
    }

    // Signed wavenumber of Fourier index m (standard DFT layout).
    double wavenumber(int m) const {
        int mm = m <= n / 2 ? m : m - n;
        return 2.0 * 3.14159265358979323846 * mm / length;
    }

    std::vector<double> wavenumbers() const {
        std::vector<double> k(n);
        for (int m = 0; m < n; ++m) k[m] = wavenumber(m);
        return k;
    }

    bool operator==(const Grid&) const = default;
};

} // namespace nlse
