#pragma once

#include "liouville_lab/bubble.hpp"
#include "liouville_lab/kernels.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace liouville_lab {

struct InteractionParams {
    int N = 1;
    double mu_s = 14, mu_l = 14;
    cplx p_s{0.0, 0.0}, p_l{0.0, 0.0};
    double h_s = 1, h_l = 1;
    double eps = std::exp(-7.0);
    double M = 1;
    double beta_s = 0;

    static InteractionParams make(int N, double mu_s, double mu_l, cplx p_s, cplx p_l, double h_s, double h_l,
                                  double M, double beta_s = 0) {
        InteractionParams P{N, mu_s, mu_l, p_s, p_l, h_s, h_l, std::exp(-mu_s / 2), M, beta_s};
        P.validate();
        return P;
    }

    void validate() const {
        if (N < 1) throw std::invalid_argument("InteractionParams: N must be >= 1");
        if (!(h_s > 0) || !(h_l > 0)) throw std::invalid_argument("InteractionParams: h must be positive");
        if (!(M > 0)) throw std::invalid_argument("InteractionParams: M must be positive");
        if (std::abs(eps / std::exp(-mu_s / 2) - 1) > 1e-12)
            throw std::invalid_argument("InteractionParams: eps must equal exp(-mu_s/2)");
        if (std::abs(p_s) > eps * M * 1e3 || std::abs(p_l) > eps * M * 1e3)
            throw std::invalid_argument("InteractionParams: |p| exceeds 1e3 eps M");
        if (std::abs(h_l - h_s) > std::min(h_s, h_l)) throw std::invalid_argument("InteractionParams: h contrast too large");
    }

    BubbleParams bubble_s() const { return {N, mu_s, p_s, h_s}; }
    BubbleParams bubble_l() const { return {N, mu_l, p_l, h_l}; }
    cplx dp() const { return p_s - p_l; }
    double theta_sl() const { return std::arg(dp()); }
    // maximum of V_s near e^{i beta_s}
    cplx Q_s() const { return std::polar(1.0, beta_s) * std::pow(1.0 + p_s, 1.0 / (N + 1)); }
};

struct Decomposition {
    double phi1 = 0, phi2 = 0, phi3 = 0, phi4 = 0;
    double B = 1;
    double exact = 0;
    double remainder = 0;
};

// V_s - V_l at Q_s + eps z split into the mu, separation (first and second
// order) and coefficient parts, with w = z + (N/2) eps z^2 e^{-i beta_s}.
inline Decomposition decompose_difference(const InteractionParams& P, cplx z) {
    P.validate();
    if (std::abs(z) > 0.5 / P.eps) throw std::domain_error("decompose_difference: |z| exceeds 0.5/eps");
    const double n1 = P.N + 1.0;
    const cplx rot = std::polar(1.0, -P.beta_s);
    const cplx w = z + 0.5 * P.N * P.eps * z * z * rot;
    const double hw = P.h_s / 8 * std::norm(w);
    Decomposition d;
    d.B = 1 + hw;
    d.phi1 = (P.mu_s - P.mu_l) * (1 - hw) / d.B;
    d.phi2 = P.h_s / (2 * n1 * d.B) * (w * std::conj(P.dp()) * rot / P.eps).real();
    const double K = P.h_s * std::norm(P.dp()) / (4 * n1 * n1 * P.eps * P.eps);
    const double ang = 2 * std::arg(z) - 2 * P.theta_sl() - 2 * P.beta_s;
    d.phi3 = K / d.B * (1 - P.h_s * std::norm(z) * (1 + std::cos(ang)) / (8 * d.B));
    d.phi4 = P.h_s / 4 * ((P.h_l - P.h_s) / P.h_s) * std::norm(w) / d.B;
    const cplx y = P.Q_s() + P.eps * z;
    d.exact = eval_bubble(P.bubble_s(), y) - eval_bubble(P.bubble_l(), y);
    d.remainder = d.exact - (d.phi1 + d.phi2 + d.phi3 + d.phi4);
    return d;
}

struct MomentIntegrals {
    double I0 = 0;
    cplx I1{0.0, 0.0};
    double I2 = 0;
    double scale0 = 0;  // integral of |integrand of I0|
    double scale1 = 0;  // integral of |integrand of I1|
};

// With q = a |z^{N+1} - P|^2 and P = params.p:
// I0 = int (1 - q)|z|^{2N}/(1+q)^3, I1 = int a (z^{N+1} - P)|z|^{2N}/(1+q)^3,
// I2 = int z_1^2/(1 + |z|^2/8)^3.
inline MomentIntegrals moment_integrals(const BubbleParams& params, const QuadratureSpec& spec) {
    params.validate();
    const double a = params.a();
    const int n1 = params.N + 1;
    const cplx P = params.p;
    const double rho0 = std::pow(a, -0.5 / n1);
    const double ring = std::pow(std::abs(P), 1.0 / n1);
    std::vector<double> rb;
    for (double k : {0.25, 0.5, 1.0, 2.0, 4.0}) rb.push_back(k * rho0);
    if (ring > 0) {
        const double w = 1 / (std::sqrt(a) * n1 * std::pow(ring, params.N));
        rb.push_back(ring);
        for (double k : {1.0, 4.0}) {
            if (ring - k * w > 0) rb.push_back(ring - k * w);
            rb.push_back(ring + k * w);
        }
    }
    std::vector<double> ab;
    if (ring > 0)
        for (int l = 0; l < n1; ++l) {
            double t = std::arg(P) / n1 + 2 * pi * l / n1;
            ab.push_back(t);
            ab.push_back(t + pi / n1);
        }
    QuadratureSpec s = spec;
    s.plane_compactification_scale = std::max(rho0, ring) * std::max(rho0, ring);
    auto parts = [&](cplx z) {
        cplx u = std::pow(z, n1) - P;
        double q = a * std::norm(u);
        double wgt = weight_power(z, params.N) / ((1 + q) * (1 + q) * (1 + q));
        return std::pair{(1 - q) * wgt, a * u * wgt};
    };
    MomentIntegrals m;
    m.I0 = integrate_plane([&](cplx z) { return parts(z).first; }, s, 0.0, rb, ab).value;
    // the absolute-value scales only set tolerances; kinks at q = 1 make them slow to resolve tightly
    QuadratureSpec loose = s;
    loose.rel_tol = std::max(s.rel_tol, 1e-6);
    m.scale0 = integrate_plane([&](cplx z) { return std::abs(parts(z).first); }, loose, 0.0, rb, ab).value;
    double re = integrate_plane([&](cplx z) { return parts(z).second.real(); }, s, 0.0, rb, ab).value;
    double im = integrate_plane([&](cplx z) { return parts(z).second.imag(); }, s, 0.0, rb, ab).value;
    m.I1 = {re, im};
    m.scale1 = integrate_plane([&](cplx z) { return std::abs(parts(z).second); }, loose, 0.0, rb, ab).value;
    QuadratureSpec s2 = spec;
    s2.plane_compactification_scale = 8;
    m.I2 = integrate_plane(
               [](cplx z) {
                   double q = 1 + std::norm(z) / 8;
                   return z.real() * z.real() / (q * q * q);
               },
               s2)
               .value;
    return m;
}

class InteractionMismatch : public std::runtime_error {
public:
    InteractionMismatch(double closed, double quad)
        : std::runtime_error("interaction mismatch: closed form " + fmt(closed) + ", quadrature " + fmt(quad)),
          closed_form(closed), quadrature(quad) {}
    double closed_form;
    double quadrature;

private:
    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return buf;
    }
};

struct InteractionResult {
    double closed_form = 0;
    double quadrature = 0;
    double phi1_integral = 0;  // int (phi1/M) B^{-2}
    double phi2_integral = 0;  // int (phi2/M) B^{-2}
};

// D = (2 pi/3) h_l |p_s - p_l|^2/((N+1)^2 eps^2 M) + 8 pi h_l (h_l - h_s)/(h_s^2 M).
inline double interaction_closed_form(const InteractionParams& P) {
    const double n1 = P.N + 1.0;
    return 2 * pi / 3 * P.h_l * std::norm(P.dp()) / (n1 * n1 * P.eps * P.eps * P.M) +
           8 * pi * P.h_l * (P.h_l - P.h_s) / (P.h_s * P.h_s * P.M);
}

// Quadrature of (phi3 + phi4)/M against h_l |Q_s + eps z|^{2N} e^{V_s} eps^2
// over |z| <= 0.5/eps.
inline InteractionResult interaction_coefficient(const InteractionParams& P, const QuadratureSpec& spec) {
    P.validate();
    InteractionResult r;
    r.closed_form = interaction_closed_form(P);
    const double R = 0.5 / P.eps;
    std::vector<double> rb;
    for (double b : {1.0, 4.0, 16.0, 64.0, 256.0})
        if (b < R) rb.push_back(b);
    const BubbleParams Vs = P.bubble_s();
    const cplx Qs = P.Q_s();
    auto kernel = [&](cplx z) {
        cplx y = Qs + P.eps * z;
        return P.h_l * weight_power(y, P.N) * std::exp(eval_bubble(Vs, y) + 2 * std::log(P.eps));
    };
    r.quadrature = integrate_disk(
                       [&](cplx z) {
                           auto d = decompose_difference(P, z);
                           return (d.phi3 + d.phi4) / P.M * kernel(z);
                       },
                       0.0, R, spec, rb)
                       .value;
    r.phi1_integral = integrate_disk(
                          [&](cplx z) {
                              auto d = decompose_difference(P, z);
                              return d.phi1 / P.M / (d.B * d.B);
                          },
                          0.0, R, spec, rb)
                          .value;
    r.phi2_integral = integrate_disk(
                          [&](cplx z) {
                              auto d = decompose_difference(P, z);
                              return d.phi2 / P.M / (d.B * d.B);
                          },
                          0.0, R, spec, rb)
                          .value;
    if (std::abs(r.quadrature - r.closed_form) > 0.1 * std::abs(r.closed_form) + 10 * P.eps)
        throw InteractionMismatch(r.closed_form, r.quadrature);
    return r;
}

struct KernelCoefficients {
    double c1 = 0, c2 = 0;
    double fit_c1 = 0, fit_c2 = 0;
    double fit_residual = 0;  // relative to the norm of the fitted data
};

// c_{1,2} = h_s |p_s - p_l| (cos, sin)(beta_s + theta_sl)/(2(N+1) M eps), cross-checked
// by a least-squares fit of phi2/M on |z| <= 20 by the kernels z_{1,2}/(1 + (h_s/8)|z|^2).
inline KernelCoefficients kernel_coefficients(const InteractionParams& P) {
    P.validate();
    KernelCoefficients k;
    const double amp = P.h_s * std::abs(P.dp()) / (2 * (P.N + 1.0) * P.M * P.eps);
    const double ang = P.beta_s + P.theta_sl();
    k.c1 = amp * std::cos(ang);
    k.c2 = amp * std::sin(ang);
    const int nr = 40, nt = 32;
    Eigen::MatrixXd A(nr * nt, 2);
    Eigen::VectorXd b(nr * nt);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nt; ++j) {
            cplx z = std::polar(20.0 * (i + 1) / nr, 2 * pi * j / nt);
            auto kv = kernel_functions(z, P.h_s / 8);
            A(i * nt + j, 0) = kv.phi1;
            A(i * nt + j, 1) = kv.phi2;
            b(i * nt + j) = decompose_difference(P, z).phi2 / P.M;
        }
    if (b.norm() == 0) return k;
    Eigen::Vector2d x = A.colPivHouseholderQr().solve(b);
    k.fit_c1 = x(0);
    k.fit_c2 = x(1);
    k.fit_residual = (A * x - b).norm() / b.norm();
    if (k.fit_residual > 0.1) throw std::runtime_error("kernel fit failed");
    return k;
}

}  // namespace liouville_lab
