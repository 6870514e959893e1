#pragma once

#include "liouville_lab/bubble.hpp"
#include "liouville_lab/fourier.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace liouville_lab {

// Harmonic function sum (r/radius)^n (a_n cos n theta + b_n sin n theta) + a_0.
struct FourierBoundaryData {
    double radius = 1;
    FourierCoefficients coefficients{1};

    void validate() const {
        if (!(radius > 0)) throw std::invalid_argument("FourierBoundaryData: radius must be positive");
        coefficients.validate();
    }

    // Coefficient of Re((a_n - i b_n) y^n) in the interior variable.
    cplx monomial(int n) const {
        double s = std::pow(radius, -n);
        return {coefficients.a[n] * s, -coefficients.b[n] * s};
    }
};

inline double harmonic_extend(const FourierBoundaryData& data, cplx y) {
    if (std::abs(y) > data.radius * (1 + 1e-14)) throw std::domain_error("harmonic_extend: point outside disk");
    const auto& c = data.coefficients;
    cplx w = y / data.radius, wn = 1.0;
    double s = c.a[0];
    for (int n = 1; n <= c.n_max(); ++n) {
        wn *= w;
        s += c.a[n] * wn.real() + c.b[n] * wn.imag();
    }
    return s;
}

// Gradient as dphi/dx + i dphi/dy, the conjugate of the holomorphic derivative.
inline cplx harmonic_gradient(const FourierBoundaryData& data, cplx y) {
    if (std::abs(y) > data.radius * (1 + 1e-14)) throw std::domain_error("harmonic_gradient: point outside disk");
    const auto& c = data.coefficients;
    cplx w = y / data.radius, wn = 1.0, d = 0.0;
    for (int n = 1; n <= c.n_max(); ++n) {
        d += static_cast<double>(n) * cplx(c.a[n], -c.b[n]) * wn;
        wn *= w;
    }
    return std::conj(d / data.radius);
}

// (d_r phi, d_theta phi) at y.
inline std::pair<double, double> harmonic_polar_derivatives(const FourierBoundaryData& data, cplx y) {
    const auto& c = data.coefficients;
    const double r = std::abs(y), th = std::arg(y), R = data.radius;
    double dr = 0, dth = 0;
    for (int n = 1; n <= c.n_max(); ++n) {
        double cs = std::cos(n * th), sn = std::sin(n * th);
        double rn1 = std::pow(r / R, n - 1) / R;
        dr += n * rn1 * (c.a[n] * cs + c.b[n] * sn);
        dth += n * rn1 * r * (-c.a[n] * sn + c.b[n] * cs);
    }
    return {dr, dth};
}

// Rows "n,a_n,b_n" with an optional header line.
inline FourierBoundaryData read_boundary_csv(std::istream& in, double radius) {
    std::vector<std::tuple<int, double, double>> rows;
    std::string line;
    int max_n = 1;
    while (std::getline(in, line)) {
        if (line.empty() || !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-')) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        int n;
        double a, b;
        if (!(ss >> n >> a >> b) || n < 0) throw std::invalid_argument("read_boundary_csv: malformed row");
        rows.emplace_back(n, a, b);
        max_n = std::max(max_n, n);
    }
    FourierBoundaryData d;
    d.radius = radius;
    d.coefficients = FourierCoefficients(max_n);
    for (auto [n, a, b] : rows) {
        d.coefficients.a[n] = a;
        d.coefficients.b[n] = n == 0 ? 0.0 : b;
    }
    d.validate();
    return d;
}

// Trace of V on |y| = 1/delta with the mean removed. As a function of
// x = delta y its coefficients are those of the unit-disk expansion.
inline FourierBoundaryData bubble_oscillation_killer(const BubbleParams& P, double delta, int n_max) {
    P.validate();
    if (!(delta > 0) || delta > 0.1) throw std::invalid_argument("bubble_oscillation_killer: delta must lie in (0, 0.1]");
    if (std::abs(P.p) != 0.0) throw std::invalid_argument("bubble_oscillation_killer: requires p = 0");
    const double R = 1 / delta;
    auto v = sample_circle([&](cplx y) { return eval_bubble(P, y); }, 0.0, R, 4 * n_max);
    FourierBoundaryData d;
    d.radius = R;
    d.coefficients = circle_fourier(v, n_max);
    d.coefficients.a[0] = 0;
    return d;
}

// Unit-disk data with |a_n|, |b_n| <= rho^{-n} and one retained mode n <= L of
// size at least min_mode.
inline FourierBoundaryData random_boundary_data(std::mt19937_64& rng, int n_max, double rho, int L, double min_mode) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    FourierBoundaryData d;
    d.coefficients = FourierCoefficients(n_max);
    for (int n = 1; n <= n_max; ++n) {
        double env = std::pow(rho, -n);
        d.coefficients.a[n] = env * u(rng);
        d.coefficients.b[n] = env * u(rng);
    }
    std::uniform_int_distribution<int> pick(1, L);
    int n0 = pick(rng);
    double mag = min_mode + (1 - min_mode) * std::abs(u(rng));
    d.coefficients.a[n0] = u(rng) < 0 ? -mag : mag;
    return d;
}

struct LayerField {
    FourierBoundaryData phi0;  // harmonic on B(0, 1/delta) in the y variable
    double delta_star = 0;
    double delta = 0;
    int L = 1;
    double tail = 0;
    bool degenerate = false;

    double phi(cplx y) const { return harmonic_extend(phi0, y); }
    double h0(cplx y) const { return std::exp(phi(y)); }
    cplx grad_phi(cplx y) const { return harmonic_gradient(phi0, y); }
    cplx grad_h0(cplx y) const { return h0(y) * grad_phi(y); }
};

// phi0(y) = Phi(delta y) - phi_v(delta y) with
// delta* = sum_{n <= L} delta^n (|a_n - a_{n,v}| + |b_n - b_{n,v}|).
inline LayerField build_layer(const FourierBoundaryData& Phi, const BubbleParams& P, double delta, int L) {
    Phi.validate();
    if (std::abs(Phi.radius - 1) > 1e-15) throw std::invalid_argument("build_layer: Phi must live on the unit disk");
    if (Phi.coefficients.a[0] != 0.0) throw std::invalid_argument("build_layer: Phi must have zero mean");
    const int n_max = Phi.coefficients.n_max();
    if (L < 1 || L > n_max) throw std::invalid_argument("build_layer: need 1 <= L <= n_max");
    FourierBoundaryData v = bubble_oscillation_killer(P, delta, n_max);
    LayerField F;
    F.delta = delta;
    F.L = L;
    F.phi0.radius = 1 / delta;
    F.phi0.coefficients = FourierCoefficients(n_max);
    bool phi_zero = true;
    for (int n = 1; n <= n_max; ++n) {
        double ga = Phi.coefficients.a[n] - v.coefficients.a[n];
        double gb = Phi.coefficients.b[n] - v.coefficients.b[n];
        F.phi0.coefficients.a[n] = ga;
        F.phi0.coefficients.b[n] = gb;
        double term = std::pow(delta, n) * (std::abs(ga) + std::abs(gb));
        (n <= L ? F.delta_star : F.tail) += term;
        if (Phi.coefficients.a[n] != 0.0 || Phi.coefficients.b[n] != 0.0) phi_zero = false;
    }
    if (phi_zero || F.delta_star == 0.0) {
        F.degenerate = true;
        F.delta_star = std::pow(delta, 2 * P.N + 2);
    }
    return F;
}

// Harmonic layer of the Dirichlet problem on the offset disk B(c, rho)/delta,
// c = -(rho - 1) e^{i theta0}, whose boundary lies between radii 1/delta and
// (2 rho - 1)/delta. The boundary data is V minus its radial far field; phi0 is
// minus its harmonic extension, re-expanded about the origin on radius 0.5/delta.
struct OffsetDiskLayer {
    LayerField field;
    FourierBoundaryData boundary;  // about center/delta, radius rho/delta
    cplx center{0.0, 0.0};
    double inner_radius = 0;
    double outer_radius = 0;
};

inline OffsetDiskLayer offset_disk_layer(const BubbleParams& P, double delta, double rho, double theta0,
                                         int n_max = 64) {
    P.validate();
    if (P.N < 1) throw std::invalid_argument("offset_disk_layer: N must be >= 1");
    if (!(delta > 0) || delta > 0.5) throw std::invalid_argument("offset_disk_layer: delta must lie in (0, 0.5]");
    if (!(rho > 1)) throw std::invalid_argument("offset_disk_layer: rho must exceed 1");
    const double n1 = P.order();
    OffsetDiskLayer out;
    out.center = -(rho - 1) * std::polar(1.0, theta0) / delta;
    out.inner_radius = 1 / delta;
    out.outer_radius = (2 * rho - 1) / delta;
    const double far = -P.mu + 2 * std::log(8 * n1 * n1 / P.h);
    auto g = [&](cplx y) { return eval_bubble(P, y) - (far - 4 * n1 * std::log(std::abs(y))); };
    out.boundary.radius = rho / delta;
    out.boundary.coefficients = circle_fourier(sample_circle(g, out.center, out.boundary.radius, 8 * n_max), n_max);
    const double r0 = 0.5 / delta;
    auto psi = [&](cplx y) { return harmonic_extend(out.boundary, y - out.center); };
    LayerField& F = out.field;
    F.delta = delta;
    F.L = P.N + 1;
    F.phi0.radius = r0;
    F.phi0.coefficients = circle_fourier(sample_circle(psi, 0.0, r0, 8 * n_max), n_max / 2);
    auto& c = F.phi0.coefficients;
    c.a[0] = 0;
    for (int n = 1; n <= c.n_max(); ++n) {
        c.a[n] = -c.a[n];
        c.b[n] = -c.b[n];
        cplx m = F.phi0.monomial(n);
        (n <= F.L ? F.delta_star : F.tail) += std::abs(m.real()) + std::abs(m.imag());
    }
    if (F.delta_star == 0.0) {
        F.degenerate = true;
        F.delta_star = std::pow(delta, 2 * P.N + 2);
    }
    return out;
}

struct RootGradients {
    int s = 0;
    double c = 0;
    std::vector<cplx> gradients;
    std::vector<double> ratios;
};

// grad h0 = h0 grad phi0 at e^{2 pi i s/(N+1)}; the magnitude comes from the
// polar form |d_r phi|^2 + r^{-2} |d_theta phi|^2.
inline RootGradients grad_h_at_roots(const LayerField& F, int N) {
    if (N < 1) throw std::invalid_argument("grad_h_at_roots: N must be >= 1");
    if (!(F.delta_star > 0)) throw std::invalid_argument("grad_h_at_roots: delta_star must be positive");
    RootGradients out;
    for (int s = 0; s <= N; ++s) {
        cplx y = std::polar(1.0, 2 * pi * s / (N + 1));
        auto [dr, dth] = harmonic_polar_derivatives(F.phi0, y);
        double h = F.h0(y);
        const double r = std::abs(y);
        out.gradients.push_back(h * (dr + cplx(0, 1) * dth / r) * y / r);
        double ratio = h * std::sqrt(dr * dr + dth * dth / (r * r)) / F.delta_star;
        out.ratios.push_back(ratio);
        if (ratio > out.c) {
            out.c = ratio;
            out.s = s;
        }
    }
    if (out.c < 0.05) throw std::runtime_error("dichotomy violated");
    return out;
}

}  // namespace liouville_lab
