#pragma once

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace liouville_lab {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
    double plane_compactification_scale = 8.0;

    void validate() const {
        if (!(rel_tol > 0) || !(abs_tol > 0))
            throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
        if (max_subdivisions < 8)
            throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 8");
        if (!(plane_compactification_scale > 0))
            throw std::invalid_argument("QuadratureSpec: compactification scale must be positive");
    }

    QuadratureSpec tightened(double factor) const {
        QuadratureSpec s = *this;
        s.rel_tol *= factor;
        s.abs_tol *= factor;
        return s;
    }
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(double partial, double estimate)
        : std::runtime_error("quadrature budget exceeded"), partial_value(partial), error_estimate(estimate) {}
    double partial_value;
    double error_estimate;
};

struct QuadResult {
    double value = 0;
    double error = 0;
};

namespace detail {

inline void quiet_gsl() {
    static const bool once = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)once;
}

template <class F>
double gsl_trampoline(double x, void* p) {
    return (*static_cast<F*>(p))(x);
}

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

template <class F>
QuadResult qag_piece(F& f, double a, double b, double abs_tol, double rel_tol, int limit) {
    gsl_function gf;
    gf.function = &gsl_trampoline<F>;
    gf.params = &f;
    std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(
        gsl_integration_workspace_alloc(static_cast<size_t>(limit)));
    double value = 0, err = 0;
    int status = gsl_integration_qag(&gf, a, b, abs_tol, rel_tol, static_cast<size_t>(limit),
                                     GSL_INTEG_GAUSS21, ws.get(), &value, &err);
    if (!std::isfinite(value)) throw std::domain_error("quadrature: non-finite integrand");
    if (status == GSL_EMAXITER) throw QuadratureError(value, err);
    // Roundoff stalls are accepted when the estimate is still near the request.
    if (status != GSL_SUCCESS && err > 100.0 * std::max(abs_tol, rel_tol * std::abs(value)))
        throw QuadratureError(value, err);
    return {value, err};
}

}  // namespace detail

// Adaptive GK21 on [a, b]; interior breakpoints split the range into pieces
// integrated independently.
template <class F>
QuadResult integrate_interval(F&& f, double a, double b, const QuadratureSpec& spec,
                              std::vector<double> breaks = {}) {
    detail::quiet_gsl();
    spec.validate();
    if (a == b) return {};
    auto g = [&](double x) { return static_cast<double>(f(x)); };
    std::vector<double> pts{a};
    std::sort(breaks.begin(), breaks.end());
    for (double x : breaks)
        if (x > a && x < b && x > pts.back()) pts.push_back(x);
    pts.push_back(b);
    const double pieces = static_cast<double>(pts.size() - 1);
    QuadResult total;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        auto r = detail::qag_piece(g, pts[i], pts[i + 1], spec.abs_tol / pieces, spec.rel_tol,
                                   spec.max_subdivisions);
        total.value += r.value;
        total.error += r.error;
    }
    return total;
}

// Periodic trapezoid rule on [0, 2pi) with doubling until successive sums agree
// relative to the integral of |f|.
template <class F>
double integrate_periodic(F&& f, const QuadratureSpec& spec, int n0 = 32, int n_cap = 1 << 16) {
    int n = n0;
    double sum = 0, abs_sum = 0;
    for (int k = 0; k < n; ++k) {
        double v = f(2 * pi * k / n);
        sum += v;
        abs_sum += std::abs(v);
    }
    double prev = sum * 2 * pi / n;
    while (n < n_cap) {
        double add = 0, abs_add = 0;
        for (int k = 0; k < n; ++k) {
            double v = f(2 * pi * (k + 0.5) / n);
            add += v;
            abs_add += std::abs(v);
        }
        sum += add;
        abs_sum += abs_add;
        n *= 2;
        double cur = sum * 2 * pi / n;
        double scale = abs_sum * 2 * pi / n;
        if (n >= 64 && std::abs(cur - prev) <= std::max(spec.abs_tol, spec.rel_tol * scale)) return cur;
        prev = cur;
    }
    throw QuadratureError(prev, std::abs(prev));
}

namespace detail {

// Angular integral over a full turn. Without breakpoints the periodic
// trapezoid rule is used; with breakpoints adaptive pieces between them.
template <class G>
double ring_integral(G&& g, const QuadratureSpec& inner, const std::vector<double>& angle_breaks) {
    if (angle_breaks.empty()) return integrate_periodic(g, inner);
    const double t0 = angle_breaks.front();
    std::vector<double> inside;
    for (double a : angle_breaks) {
        double t = t0 + std::fmod(std::fmod(a - t0, 2 * pi) + 2 * pi, 2 * pi);
        if (t > t0) inside.push_back(t);
    }
    return integrate_interval(g, t0, t0 + 2 * pi, inner, inside).value;
}

}  // namespace detail

template <class F>
QuadResult integrate_annulus(F&& f, cplx center, double r0, double r1, const QuadratureSpec& spec,
                             std::vector<double> radial_breaks = {}, const std::vector<double>& angle_breaks = {}) {
    if (!(r0 >= 0) || !(r1 > r0)) throw std::invalid_argument("integrate_annulus: need 0 <= r0 < r1");
    const QuadratureSpec inner = spec.tightened(0.1);
    auto ring = [&](double rho) {
        auto g = [&](double th) { return static_cast<double>(f(center + std::polar(rho, th))); };
        return rho * detail::ring_integral(g, inner, angle_breaks);
    };
    return integrate_interval(ring, r0, r1, spec, std::move(radial_breaks));
}

// Integral over the disk B(center, radius) in polar coordinates around center.
template <class F>
QuadResult integrate_disk(F&& f, cplx center, double radius, const QuadratureSpec& spec,
                          std::vector<double> radial_breaks = {}, const std::vector<double>& angle_breaks = {}) {
    return integrate_annulus(std::forward<F>(f), center, 0.0, radius, spec, std::move(radial_breaks),
                             angle_breaks);
}

// Whole-plane integral through t = r^2/(s + r^2), s the compactification scale.
// Radial breakpoints are given in r and mapped to t.
template <class F>
QuadResult integrate_plane(F&& f, const QuadratureSpec& spec, cplx center = 0.0,
                           const std::vector<double>& radial_breaks = {},
                           const std::vector<double>& angle_breaks = {}) {
    spec.validate();
    const double s = spec.plane_compactification_scale;
    const QuadratureSpec inner = spec.tightened(0.1);
    auto slice = [&](double t) {
        double r = std::sqrt(s * t / (1 - t));
        double jac = s / (2 * (1 - t) * (1 - t));
        auto g = [&](double th) { return static_cast<double>(f(center + std::polar(r, th))); };
        return jac * detail::ring_integral(g, inner, angle_breaks);
    };
    std::vector<double> tb;
    for (double r : radial_breaks)
        if (r > 0) tb.push_back(r * r / (s + r * r));
    return integrate_interval(slice, 0.0, 1.0, spec, tb);
}

// Integral over B(center, radius) in polar coordinates about an interior
// focus point, for integrands concentrated near the focus. Radial pieces are
// split geometrically towards the focus.
template <class F>
double integrate_disk_about(F&& f, cplx center, double radius, cplx focus, const QuadratureSpec& spec,
                            int levels = 24) {
    const cplx d = focus - center;
    if (!(std::abs(d) < radius)) throw std::invalid_argument("integrate_disk_about: focus must lie inside the disk");
    const QuadratureSpec inner = spec.tightened(0.1);
    auto ray = [&](double th) {
        const cplx e = std::polar(1.0, th);
        const double b = (d * std::conj(e)).real();
        const double reach = -b + std::sqrt(b * b - std::norm(d) + radius * radius);
        std::vector<double> br;
        for (int k = 1; k <= levels; ++k) br.push_back(reach * std::ldexp(1.0, -k));
        auto g = [&](double t) { return t * static_cast<double>(f(focus + t * e)); };
        return integrate_interval(g, 0.0, reach, inner, br).value;
    };
    return integrate_periodic(ray, spec);
}

}  // namespace liouville_lab
