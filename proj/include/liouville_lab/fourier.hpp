#pragma once

#include "liouville_lab/quadrature.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace liouville_lab {

struct PolarGrid {
    std::vector<double> radii;
    std::vector<double> angles;
    cplx center{0.0, 0.0};

    static PolarGrid uniform(std::vector<double> radii, int n_angles, cplx center = 0.0) {
        PolarGrid g;
        g.radii = std::move(radii);
        g.center = center;
        for (int k = 0; k < n_angles; ++k) g.angles.push_back(2 * pi * k / n_angles);
        g.validate();
        return g;
    }

    void validate() const {
        for (size_t i = 0; i < radii.size(); ++i) {
            if (radii[i] < 0) throw std::invalid_argument("PolarGrid: negative radius");
            if (i > 0 && !(radii[i] > radii[i - 1]))
                throw std::invalid_argument("PolarGrid: radii must be strictly ascending");
        }
        if (angles.size() < 4 || angles.size() % 2 != 0)
            throw std::invalid_argument("PolarGrid: angle count must be even and >= 4");
    }

    cplx point(size_t i, size_t k) const { return center + std::polar(radii[i], angles[k]); }
};

// a[0..n_max] cosine, b[0..n_max] sine with b[0] unused.
struct FourierCoefficients {
    std::vector<double> a;
    std::vector<double> b;

    FourierCoefficients() = default;
    explicit FourierCoefficients(int n_max) : a(n_max + 1, 0.0), b(n_max + 1, 0.0) {}

    int n_max() const { return static_cast<int>(a.size()) - 1; }

    void validate() const {
        if (a.size() < 2 || a.size() != b.size())
            throw std::invalid_argument("FourierCoefficients: need n_max >= 1 and matching lengths");
        for (size_t n = 0; n < a.size(); ++n)
            if (!std::isfinite(a[n]) || !std::isfinite(b[n]))
                throw std::invalid_argument("FourierCoefficients: non-finite entry");
    }

    double operator()(double theta) const {
        double s = a[0];
        for (int n = 1; n <= n_max(); ++n) s += a[n] * std::cos(n * theta) + b[n] * std::sin(n * theta);
        return s;
    }
};

inline FourierCoefficients circle_fourier(const std::vector<double>& values, int n_max) {
    const int m = static_cast<int>(values.size());
    if (n_max < 1) throw std::invalid_argument("circle_fourier: n_max must be >= 1");
    if (m < 4 * n_max) throw std::invalid_argument("Nyquist violation");
    FourierCoefficients c(n_max);
    for (int n = 0; n <= n_max; ++n) {
        double sc = 0, ss = 0;
        for (int k = 0; k < m; ++k) {
            // Reduce n*k mod m so large products keep full angular precision.
            double th = 2 * pi * static_cast<double>((static_cast<long long>(n) * k) % m) / m;
            sc += values[k] * std::cos(th);
            ss += values[k] * std::sin(th);
        }
        c.a[n] = (n == 0 ? 1.0 : 2.0) * sc / m;
        c.b[n] = n == 0 ? 0.0 : 2.0 * ss / m;
    }
    return c;
}

inline std::vector<double> sample_circle(const std::function<double(cplx)>& f, cplx center, double radius,
                                         int samples) {
    std::vector<double> v(samples);
    for (int k = 0; k < samples; ++k) v[k] = f(center + std::polar(radius, 2 * pi * k / samples));
    return v;
}

inline std::vector<double> fourier_synthesis(const FourierCoefficients& c, int samples) {
    std::vector<double> v(samples);
    for (int k = 0; k < samples; ++k) v[k] = c(2 * pi * k / samples);
    return v;
}

}  // namespace liouville_lab
