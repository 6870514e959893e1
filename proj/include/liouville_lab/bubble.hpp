#pragma once

#include "liouville_lab/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace liouville_lab {

struct BubbleParams {
    int N = 0;
    double mu = 0;
    cplx p{0.0, 0.0};
    double h = 1;

    void validate() const {
        if (N < 0) throw std::invalid_argument("BubbleParams: N must be >= 0");
        if (!(h > 0)) throw std::invalid_argument("BubbleParams: h must be positive");
        if (!(std::abs(p) < 1)) throw std::invalid_argument("BubbleParams: |p| must be < 1");
        if (!std::isfinite(mu)) throw std::invalid_argument("BubbleParams: mu must be finite");
    }

    double order() const { return N + 1.0; }
    // a in V = mu - 2 log(1 + a |y^{N+1} - 1 - p|^2)
    double a() const { return h * std::exp(mu) / (8 * order() * order()); }
    cplx center() const { return 1.0 + p; }
};

struct MaximaConfiguration {
    int N = 1;
    std::vector<cplx> Q;
    std::vector<cplx> m;
    double R = std::numeric_limits<double>::infinity();

    void validate() const {
        if (N < 1) throw std::invalid_argument("MaximaConfiguration: N must be >= 1");
        if (Q.size() != static_cast<size_t>(N + 1) || m.size() != Q.size())
            throw std::invalid_argument("MaximaConfiguration: need N+1 points");
        for (cplx q : Q)
            if (std::abs(q) <= 0.5 || std::abs(q) >= 1.5)
                throw std::invalid_argument("MaximaConfiguration: |Q_l| outside (0.5, 1.5)");
        if (std::abs(m[0]) != 0.0) throw std::invalid_argument("MaximaConfiguration: m_0 must vanish");
    }

    static MaximaConfiguration from_points(int N, std::vector<cplx> Q, double R) {
        MaximaConfiguration c;
        c.N = N;
        c.R = R;
        c.Q = std::move(Q);
        c.m.resize(c.Q.size());
        for (size_t l = 0; l < c.Q.size(); ++l) {
            cplx rot = std::polar(1.0, -2 * pi * static_cast<double>(l) / (N + 1));
            c.m[l] = l == 0 ? cplx(0.0) : c.Q[l] / c.Q[0] * rot - 1.0;
        }
        return c;
    }

    static MaximaConfiguration roots_of_unity(int N, double R) {
        std::vector<cplx> Q;
        for (int l = 0; l <= N; ++l) Q.push_back(std::polar(1.0, 2 * pi * l / (N + 1)));
        return from_points(N, std::move(Q), R);
    }
};

inline double bubble_quadratic(const BubbleParams& P, cplx y) {
    return P.a() * std::norm(std::pow(y, P.N + 1) - P.center());
}

inline double eval_bubble(const BubbleParams& P, cplx y) {
    return P.mu - 2 * std::log1p(bubble_quadratic(P, y));
}

// Gradient as the complex number dV/dx + i dV/dy.
inline cplx bubble_gradient(const BubbleParams& P, cplx y) {
    const double n1 = P.order();
    cplx wc = std::pow(y, P.N + 1) - P.center();
    double F = P.a() * std::norm(wc);
    cplx dw = n1 * std::pow(y, P.N);
    return -4 * P.a() * wc * std::conj(dw) / (1 + F);
}

inline double bubble_laplacian(const BubbleParams& P, cplx y) {
    const double n1 = P.order();
    double F = bubble_quadratic(P, y);
    double r2N = P.N == 0 ? 1.0 : std::pow(std::norm(y), P.N);
    return -8 * P.a() * n1 * n1 * r2N / ((1 + F) * (1 + F));
}

inline double weight_power(cplx y, int N) { return N == 0 ? 1.0 : std::pow(std::norm(y), N); }

inline double bubble_residual(const BubbleParams& P, cplx y) {
    return bubble_laplacian(P, y) + weight_power(y, P.N) * P.h * std::exp(eval_bubble(P, y));
}

// Width of one peak in y, used to place quadrature breakpoints.
inline double bubble_peak_width(const BubbleParams& P) {
    return 1.0 / (std::sqrt(P.a()) * P.order() * std::pow(std::abs(P.center()), P.N / P.order()));
}

inline std::vector<double> bubble_radial_breaks(const BubbleParams& P) {
    const double ring = std::pow(std::abs(P.center()), 1.0 / P.order());
    const double w = bubble_peak_width(P);
    std::vector<double> br{ring};
    for (double k : {1.0, 4.0, 16.0, 64.0}) {
        if (ring - k * w > 0) br.push_back(ring - k * w);
        br.push_back(ring + k * w);
    }
    std::sort(br.begin(), br.end());
    return br;
}

inline std::vector<double> bubble_angle_breaks(const BubbleParams& P) {
    const double b0 = std::arg(P.center()) / P.order();
    std::vector<double> br;
    for (int l = 0; l <= P.N; ++l) {
        double t = b0 + 2 * pi * l / P.order();
        br.push_back(t);
        br.push_back(t + pi / P.order());
    }
    return br;
}

inline double total_mass(const BubbleParams& P, const QuadratureSpec& spec) {
    P.validate();
    QuadratureSpec s = spec;
    s.plane_compactification_scale = std::pow(std::abs(P.center()), 2.0 / P.order());
    auto f = [&](cplx y) { return weight_power(y, P.N) * P.h * std::exp(eval_bubble(P, y)); };
    return integrate_plane(f, s, 0.0, bubble_radial_breaks(P), bubble_angle_breaks(P)).value;
}

struct MaximaResult {
    MaximaConfiguration config;
    std::vector<cplx> predicted;
    std::vector<double> gap;
};

inline MaximaResult find_maxima(const BubbleParams& P) {
    P.validate();
    if (P.N < 1) throw std::invalid_argument("find_maxima: N must be >= 1");
    if (std::abs(P.p) >= 0.3) throw std::runtime_error("maxima not localized");
    const int n1 = P.N + 1;
    const cplx target = P.center();
    std::vector<cplx> Q;
    MaximaResult out;
    for (int l = 0; l < n1; ++l) {
        const cplx root = std::polar(1.0, 2 * pi * l / n1);
        cplx y = root;
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
            cplx F = std::pow(y, n1) - target;
            cplx step = F / (static_cast<double>(n1) * std::pow(y, n1 - 1));
            y -= step;
            if (std::abs(step) <= 1e-15 * std::abs(y)) {
                ok = true;
                break;
            }
        }
        if (!ok || std::abs(y - root) > 0.5) throw std::runtime_error("maxima not localized");
        Q.push_back(y);
        out.predicted.push_back(root * (1.0 + P.p / static_cast<double>(n1)));
        out.gap.push_back(std::abs(y - out.predicted.back()));
    }
    out.config = MaximaConfiguration::from_points(P.N, std::move(Q), std::numeric_limits<double>::infinity());
    return out;
}

struct FarFieldSpec {
    double L = 10;
    double theta = 0;

    void validate() const {
        if (!(L > 2)) throw std::invalid_argument("FarFieldSpec: L must exceed 2");
    }
};

enum class FarFieldForm { derived, displayed };

// Expansion of V on |y| = L for the centered bubble. The derived form keeps
// the exact trace coefficients 4/L^{N+1} and 2/L^{2N+2}; the displayed form
// carries an extra constant 2/L^{2N+2} and coefficient 4 on the second mode.
inline double far_field_expansion(const BubbleParams& P, const FarFieldSpec& S,
                                  FarFieldForm form = FarFieldForm::derived) {
    const double n1 = P.order();
    double v = -P.mu + 2 * std::log(8 * n1 * n1 / P.h) - 4 * n1 * std::log(S.L) +
               4 * std::cos(n1 * S.theta) / std::pow(S.L, n1);
    if (form == FarFieldForm::derived)
        v += 2 * std::cos(2 * n1 * S.theta) / std::pow(S.L, 2 * n1);
    else
        v += 2 / std::pow(S.L, 2 * n1) + 4 * std::cos(2 * n1 * S.theta) / std::pow(S.L, 2 * n1);
    return v;
}

inline double far_field_gap(const BubbleParams& P, const FarFieldSpec& S,
                            FarFieldForm form = FarFieldForm::derived) {
    P.validate();
    S.validate();
    if (std::abs(P.p) != 0.0) throw std::invalid_argument("far_field_gap: requires p = 0");
    return eval_bubble(P, std::polar(S.L, S.theta)) - far_field_expansion(P, S, form);
}

inline double far_field_bound(const BubbleParams& P, double L) {
    return std::pow(L, -3.0 * P.order()) + std::exp(-P.mu) * std::pow(L, -2.0 * P.order());
}

// Leading size of the remainder: (4/3) L^{-3N-3} from the cubic trace term and
// 2/(a L^{2N+2}) = 16 (N+1)^2 e^{-mu}/(h L^{2N+2}) from the log(1 + 1/(a|w|^2)) tail.
inline double far_field_leading_remainder(const BubbleParams& P, double L) {
    const double n1 = P.order();
    return 4.0 / 3 * std::pow(L, -3 * n1) + 16 * n1 * n1 * std::exp(-P.mu) / (P.h * std::pow(L, 2 * n1));
}

// Caffarelli-Gidas-Spruck bubble normalized by U(0) = 0.
inline double cgs_bubble(double h, cplx z) { return -2 * std::log1p(h / 8 * std::norm(z)); }

inline double rescaled_profile_gap(const BubbleParams& P, cplx z) {
    const double eps = std::exp(-P.mu / 2);
    if (std::abs(z) > 0.5 / eps) throw std::domain_error("rescaled_profile_gap: |z| exceeds 0.5/eps");
    cplx Q0 = P.N == 0 ? P.center() : find_maxima(P).config.Q[0];
    return eval_bubble(P, Q0 + eps * z) + 2 * std::log(eps) - cgs_bubble(P.h, z);
}

}  // namespace liouville_lab
