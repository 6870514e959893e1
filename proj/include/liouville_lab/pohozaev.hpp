#pragma once

#include "liouville_lab/bubble.hpp"
#include "liouville_lab/layer.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace liouville_lab {

struct ScalarField {
    std::function<double(cplx)> value;
    std::function<cplx(cplx)> gradient;  // d/dx + i d/dy
    std::function<double(cplx)> laplacian;
};

inline ScalarField bubble_field(const BubbleParams& P) {
    return {[P](cplx y) { return eval_bubble(P, y); }, [P](cplx y) { return bubble_gradient(P, y); },
            [P](cplx y) { return bubble_laplacian(P, y); }};
}

inline ScalarField constant_field(double c) {
    return {[c](cplx) { return c; }, [](cplx) { return cplx(0.0); }, [](cplx) { return 0.0; }};
}

inline ScalarField layer_coefficient(const LayerField& F) {
    return {[F](cplx y) { return F.h0(y); }, [F](cplx y) { return F.grad_h0(y); },
            [F](cplx y) { return F.h0(y) * std::norm(F.grad_phi(y)); }};
}

struct PohozaevReport {
    double volume_term = 0;
    double flux_term = 0;
    double boundary_kinetic = 0;
    double residual = 0;
    cplx center{0.0, 0.0};
    double radius = 0;
    cplx direction{1.0, 0.0};

    double scale() const { return std::abs(volume_term) + std::abs(flux_term) + std::abs(boundary_kinetic) + 1; }
};

inline nlohmann::json to_json(const PohozaevReport& r) {
    return {{"volume_term", r.volume_term},
            {"flux_term", r.flux_term},
            {"boundary_kinetic", r.boundary_kinetic},
            {"residual", r.residual},
            {"center", {r.center.real(), r.center.imag()}},
            {"radius", r.radius},
            {"direction", {r.direction.real(), r.direction.imag()}}};
}

namespace detail {

inline double dot(cplx a, cplx b) { return (a * std::conj(b)).real(); }

inline void check_disk(int N, cplx center, double radius, cplx xi) {
    if (N < 0) throw std::invalid_argument("pohozaev: N must be >= 0");
    if (!(radius > 0)) throw std::invalid_argument("pohozaev: radius must be positive");
    if (std::abs(std::abs(xi) - 1) > 1e-12) throw std::invalid_argument("pohozaev: xi must be a unit vector");
    if (N > 0 && std::abs(center) <= radius) throw std::invalid_argument("pohozaev: origin inside the disk");
}

}  // namespace detail

// volume = int d_xi(|y|^{2N} h) e^u, flux = oint e^u |y|^{2N} h (xi.nu),
// kinetic = oint (d_nu u d_xi u - |grad u|^2 (xi.nu)/2); no solution check.
inline PohozaevReport pohozaev_terms(const ScalarField& u, const ScalarField& h, int N, cplx center, double radius,
                                     cplx xi, const QuadratureSpec& spec, cplx focus) {
    detail::check_disk(N, center, radius, xi);
    PohozaevReport r;
    r.center = center;
    r.radius = radius;
    r.direction = xi;
    auto dK = [&](cplx y) {
        double w = weight_power(y, N);
        double dw = N == 0 ? 0.0 : 2.0 * N * weight_power(y, N - 1) * detail::dot(y, xi);
        return dw * h.value(y) + w * detail::dot(h.gradient(y), xi);
    };
    r.volume_term = integrate_disk_about([&](cplx y) { return dK(y) * std::exp(u.value(y)); }, center, radius, focus, spec);
    auto on_circle = [&](auto&& g) {
        return radius * integrate_periodic([&](double th) { return g(std::polar(1.0, th)); }, spec);
    };
    r.flux_term = on_circle([&](cplx nu) {
        cplx y = center + radius * nu;
        return std::exp(u.value(y)) * weight_power(y, N) * h.value(y) * detail::dot(xi, nu);
    });
    r.boundary_kinetic = on_circle([&](cplx nu) {
        cplx g = u.gradient(center + radius * nu);
        return detail::dot(g, nu) * detail::dot(g, xi) - 0.5 * std::norm(g) * detail::dot(xi, nu);
    });
    r.residual = r.volume_term - r.flux_term - r.boundary_kinetic;
    return r;
}

// Pohozaev identity on B(center, radius) after spot-checking that u solves
// Delta u + |y|^{2N} h e^u = 0 there.
inline PohozaevReport pohozaev_check(const ScalarField& u, const ScalarField& h, int N, cplx center, double radius,
                                     cplx xi, const QuadratureSpec& spec, std::optional<cplx> focus = std::nullopt) {
    detail::check_disk(N, center, radius, xi);
    std::vector<cplx> probes{center};
    for (int k = 0; k < 8; ++k) {
        probes.push_back(center + std::polar(radius, pi * k / 4));
        probes.push_back(center + std::polar(0.5 * radius, pi * k / 4 + 0.3));
    }
    if (focus) probes.push_back(*focus);
    for (cplx y : probes) {
        double src = weight_power(y, N) * h.value(y) * std::exp(u.value(y));
        double lap = u.laplacian(y);
        if (std::abs(lap + src) > 1e-6 * (std::abs(lap) + std::abs(src) + 1)) throw std::runtime_error("not a solution");
    }
    return pohozaev_terms(u, h, N, center, radius, xi, spec, focus.value_or(center));
}

struct ContrastResult {
    double value = 0;
    double expected = 0;  // d_xi h0(Q_s) 8 pi/h
    double gradient_norm = 0;
};

inline cplx bubble_maximum(const BubbleParams& P, int s) {
    if (P.N == 0) {
        if (s != 0) throw std::invalid_argument("bubble_maximum: index out of range");
        return P.center();
    }
    if (s < 0 || s > P.N) throw std::invalid_argument("bubble_maximum: index out of range");
    return find_maxima(P).config.Q[static_cast<size_t>(s)];
}

// int_{B(Q_s, radius)} d_xi h0 |y|^{2N} e^V dy against d_xi h0(Q_s) times the
// local mass 8 pi/h of one peak.
inline ContrastResult coefficient_contrast(const BubbleParams& P, const ScalarField& h0, int s, cplx xi, double radius,
                                           const QuadratureSpec& spec, double delta_star) {
    P.validate();
    if (std::abs(std::abs(xi) - 1) > 1e-12) throw std::invalid_argument("coefficient_contrast: xi must be a unit vector");
    const cplx Q = bubble_maximum(P, s);
    ContrastResult c;
    c.gradient_norm = std::abs(h0.gradient(Q));
    if (c.gradient_norm < 0.05 * delta_star)
        throw std::invalid_argument("coefficient_contrast: gradient at Q_s below 0.05 delta*");
    c.value = integrate_disk_about(
        [&](cplx y) { return detail::dot(h0.gradient(y), xi) * weight_power(y, P.N) * std::exp(eval_bubble(P, y)); }, Q,
        radius, Q, spec);
    c.expected = detail::dot(h0.gradient(Q), xi) * 8 * pi / P.h;
    if (std::abs(c.value - c.expected) > 0.1 * c.gradient_norm * 8 * pi / P.h) throw std::runtime_error("contrast mismatch");
    return c;
}

inline ContrastResult coefficient_contrast(const BubbleParams& P, const LayerField& F, int s, cplx xi, double radius,
                                           const QuadratureSpec& spec) {
    return coefficient_contrast(P, layer_coefficient(F), s, xi, radius, spec, F.delta_star);
}

struct ByPartsResult {
    double volume = 0;               // 2N int y_xi |y|^{2N-2} h e^V w
    double boundary = 0;             // 2N oint (d_nu(y_xi/|y|^2) w - d_nu w y_xi/|y|^2)
    double coefficient_volume = 0;   // 2N int (y_xi/|y|^2)(Delta w + |y|^{2N} h e^V w)
    double mismatch = 0;             // volume - boundary - coefficient_volume
    double boundary_size = 0;        // max of |w|, |grad w| on the circle
    double bound = 0;                // 10 boundary_size 2N circumference/radius
};

// Green's second identity with the harmonic weight y_xi/|y|^2 on B(Q_s, radius).
inline ByPartsResult byparts_identity(const BubbleParams& P, const ScalarField& w, int s, cplx xi, double radius,
                                      const QuadratureSpec& spec) {
    P.validate();
    const cplx Q = bubble_maximum(P, s);
    detail::check_disk(P.N, Q, radius, xi);
    ByPartsResult r;
    const double twoN = 2.0 * P.N;
    for (int k = 0; k < 64; ++k) {
        cplx y = Q + std::polar(radius, 2 * pi * k / 64);
        r.boundary_size = std::max({r.boundary_size, std::abs(w.value(y)), std::abs(w.gradient(y))});
    }
    r.bound = 10 * r.boundary_size * twoN * 2 * pi;
    if (P.N == 0) return r;
    auto weight = [&](cplx y) { return detail::dot(y, xi) / std::norm(y); };
    // y_xi/|y|^2 = Re(xi/y), so its gradient is -conj(xi/y^2)
    auto weight_grad = [&](cplx y) { return -std::conj(xi / (y * y)); };
    r.volume = twoN * integrate_disk_about(
                          [&](cplx y) {
                              return weight(y) * weight_power(y, P.N) * P.h * std::exp(eval_bubble(P, y)) * w.value(y);
                          },
                          Q, radius, Q, spec);
    r.coefficient_volume =
        twoN * integrate_disk_about(
                   [&](cplx y) {
                       return weight(y) *
                              (w.laplacian(y) + weight_power(y, P.N) * P.h * std::exp(eval_bubble(P, y)) * w.value(y));
                   },
                   Q, radius, Q, spec);
    r.boundary = twoN * radius * integrate_periodic(
                                     [&](double th) {
                                         cplx nu = std::polar(1.0, th), y = Q + radius * nu;
                                         return detail::dot(weight_grad(y), nu) * w.value(y) -
                                                detail::dot(w.gradient(y), nu) * weight(y);
                                     },
                                     spec);
    r.mismatch = r.volume - r.boundary - r.coefficient_volume;
    return r;
}

}  // namespace liouville_lab
