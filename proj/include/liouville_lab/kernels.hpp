#pragma once

#include "liouville_lab/numerics.hpp"
#include "liouville_lab/radial_profile.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace liouville_lab {

struct KernelValues {
    double phi0 = 0;
    double phi1 = 0;
    double phi2 = 0;
};

inline KernelValues kernel_functions(cplx z, double c) {
    double q = 1 + c * std::norm(z);
    return {(1 - c * std::norm(z)) / q, z.real() / q, z.imag() / q};
}

// Delta phi + 8c/(1+c|z|^2)^2 phi for each kernel, from closed-form Laplacians.
inline std::array<double, 3> kernel_residuals(cplx z, double c) {
    double r2 = std::norm(z), q = 1 + c * r2, q3 = q * q * q;
    auto k = kernel_functions(z, c);
    double pot = 8 * c / (q * q);
    double lap0 = 8 * c * (c * r2 - 1) / q3;
    double lap1 = -8 * c * z.real() / q3;
    double lap2 = -8 * c * z.imag() / q3;
    return {lap0 + pot * k.phi0, lap1 + pot * k.phi1, lap2 + pot * k.phi2};
}

struct ModeProblem {
    int mode = 0;
    double c = 0.125;
    double rhs_decay = 3;
    double r_max = 1000;

    void validate() const {
        if (mode < 0 || mode > 64) throw std::invalid_argument("ModeProblem: mode must lie in [0, 64]");
        if (!(c > 0)) throw std::invalid_argument("ModeProblem: c must be positive");
        if (!(r_max > 1)) throw std::invalid_argument("ModeProblem: r_max must exceed 1");
    }

    double potential(double r) const {
        double q = 1 + c * r * r;
        return 8 * c / (q * q);
    }
};

namespace detail {

inline QuadratureSpec kernel_ode_spec() {
    QuadratureSpec s;
    s.rel_tol = 1e-12;
    s.abs_tol = 1e-300;
    s.max_subdivisions = 100000;
    return s;
}

// Antiderivative of dF/dx = rate(x) with F(x_anchor) = value, dense on [x_lo, x_hi].
struct Antiderivative {
    std::shared_ptr<OdeTrajectory> left, right;
    double x_anchor = 0;

    template <class Rate>
    Antiderivative(Rate rate, double x_lo, double x_anchor_, double x_hi, double value) : x_anchor(x_anchor_) {
        auto rhs = [&](double x, const OdeState&, OdeState& d) { d[0] = rate(x); };
        auto spec = kernel_ode_spec();
        if (x_anchor > x_lo)
            left = std::make_shared<OdeTrajectory>(ode_integrate(rhs, x_anchor, {value}, x_lo, spec));
        if (x_hi > x_anchor)
            right = std::make_shared<OdeTrajectory>(ode_integrate(rhs, x_anchor, {value}, x_hi, spec));
    }

    double operator()(double x) const { return x < x_anchor ? left->component(0, x) : right->component(0, x); }
};

}  // namespace detail

// Fundamental solutions of g'' + g'/r + (8c/(1+cr^2)^2 - l^2/r^2) g = 0.
// g1 is regular at the origin (g1 ~ r^l); g2 comes from reduction of order,
// normalized so that r (g1 g2' - g1' g2) equals 1 (mode 0), -2 (mode 1),
// -2l (mode l >= 2).
class FundamentalPair {
public:
    explicit FundamentalPair(const ModeProblem& P) : P_(P) {
        P_.validate();
        const int l = P_.mode;
        const double c = P_.c;
        r_lo_ = l >= 2 ? std::max(1e-6, std::pow(10.0, -200.0 / l)) : 1e-6;
        if (l == 0) {
            r_zero_ = 1 / std::sqrt(c);
            r_left_ = 0.95 * r_zero_;
            r_right_ = 1.05 * r_zero_;
            // int_0^r (g1^{-2} - 1) ds / s, integrand written without cancellation
            auto rate_left = [c](double x) {
                double r2 = std::exp(2 * x);
                double d = 1 - c * r2;
                return 4 * c * r2 / (d * d);
            };
            const double x_lo = std::log(r_lo_);
            const double I0 = 2 * c * r_lo_ * r_lo_ / (1 - c * r_lo_ * r_lo_);
            left_ = std::make_shared<detail::Antiderivative>(rate_left, x_lo, x_lo, std::log(r_left_), I0);
            auto rhs = [this](double r, const OdeState& y, OdeState& d) {
                d[0] = y[1];
                d[1] = -y[1] / r - (P_.potential(r)) * y[0];
            };
            bridge_ = std::make_shared<OdeTrajectory>(
                ode_integrate(rhs, r_left_, {g2(r_left_), g2p(r_left_)}, r_right_, detail::kernel_ode_spec()));
            const double xr = std::log(r_right_);
            Cb_ = bridge_->final_state()[0] / g1(r_right_);
            auto rate_right = [this](double x) {
                double g = g1(std::exp(x));
                return 1 / (g * g);
            };
            right_ = std::make_shared<detail::Antiderivative>(rate_right, xr, xr, std::log(P_.r_max) + 1e-9, 0.0);
        } else if (l == 1) {
            auto rate = [c](double x) {
                double r2 = std::exp(2 * x);
                double q = 1 + c * r2;
                return -2 * q * q / r2;
            };
            right_ = std::make_shared<detail::Antiderivative>(rate, std::log(r_lo_), 0.0,
                                                              std::log(P_.r_max) + 1e-9, 1 - c * c);
        } else {
            const double x_lo = std::log(r_lo_), x_far = std::log(100 * P_.r_max);
            auto rhs_f = [this, l](double x, const OdeState& y, OdeState& d) {
                double r2 = std::exp(2 * x);
                double q = 1 + P_.c * r2;
                d[0] = y[1];
                d[1] = -2.0 * l * y[1] - 8 * P_.c * r2 / (q * q) * y[0];
            };
            const double a = -2 * c * r_lo_ * r_lo_ / (l + 1);
            f_ = std::make_shared<OdeTrajectory>(
                ode_integrate(rhs_f, x_lo, {1 + a, 2 * a}, x_far, detail::kernel_ode_spec()));
            auto rhs_J = [this, l](double x, const OdeState& y, OdeState& d) {
                double fv = f_->component(0, x);
                d[0] = 2.0 * l * y[0] - 1 / (fv * fv);
            };
            const double f_far = f_->final_state()[0];
            J_ = std::make_shared<OdeTrajectory>(
                ode_integrate(rhs_J, x_far, {1 / (2.0 * l * f_far * f_far)}, x_lo, detail::kernel_ode_spec()));
        }
    }

    const ModeProblem& problem() const { return P_; }
    double r_lo() const { return r_lo_; }

    double wronskian() const {
        const int l = P_.mode;
        return l == 0 ? 1.0 : (l == 1 ? -2.0 : -2.0 * l);
    }

    double g1(double r) const {
        check(r);
        const double c = P_.c;
        if (P_.mode == 0) return (1 - c * r * r) / (1 + c * r * r);
        if (P_.mode == 1) return r / (1 + c * r * r);
        return std::pow(r, P_.mode) * f(r);
    }

    double g1p(double r) const {
        check(r);
        const double c = P_.c;
        const double q = 1 + c * r * r;
        if (P_.mode == 0) return -4 * c * r / (q * q);
        if (P_.mode == 1) return (1 - c * r * r) / (q * q);
        const int l = P_.mode;
        return std::pow(r, l - 1) * (l * f(r) + fx(r));
    }

    double g2(double r) const {
        check(r);
        const int l = P_.mode;
        if (l == 0) {
            if (r <= r_left_) {
                double I = r < r_lo_ ? 2 * P_.c * r * r / (1 - P_.c * r * r) : (*left_)(std::log(r));
                return g1(r) * (std::log(r) + 2 + I);
            }
            if (r < r_right_) return bridge_->component(0, r);
            return g1(r) * (Cb_ + (*right_)(std::log(r)));
        }
        if (l == 1) return g1(r) * K1(r);
        return 2.0 * l * std::pow(r, -l) * f(r) * J(r);
    }

    double g2p(double r) const {
        check(r);
        const int l = P_.mode;
        if (l == 0) {
            if (r <= r_left_) {
                double I = r < r_lo_ ? 2 * P_.c * r * r / (1 - P_.c * r * r) : (*left_)(std::log(r));
                return g1p(r) * (std::log(r) + 2 + I) + 1 / (r * g1(r));
            }
            if (r < r_right_) return bridge_->derivative(0, r);
            return g1p(r) * (Cb_ + (*right_)(std::log(r))) + 1 / (r * g1(r));
        }
        if (l == 1) {
            double g = g1(r);
            return g1p(r) * K1(r) - 2 / (r * g);
        }
        return 2.0 * l * std::pow(r, -l - 1) * ((l * f(r) + fx(r)) * J(r) - 1 / f(r));
    }

private:
    void check(double r) const {
        if (!(r > 0) || r > P_.r_max * (1 + 1e-9)) throw std::domain_error("FundamentalPair: r outside (0, r_max]");
    }

    double K1(double r) const {
        if (r >= r_lo_) return (*right_)(std::log(r));
        const double c = P_.c;
        auto prim = [c](double s) { return 1 / (s * s) - 4 * c * std::log(s) - c * c * s * s; };
        return (*right_)(std::log(r_lo_)) + prim(r) - prim(r_lo_);
    }

    double f(double r) const {
        if (r < r_lo_) return 1 - 2 * P_.c * r * r / (P_.mode + 1);
        return f_->component(0, std::log(r));
    }

    double fx(double r) const {
        if (r < r_lo_) return -4 * P_.c * r * r / (P_.mode + 1);
        return f_->component(1, std::log(r));
    }

    double J(double r) const {
        if (r < r_lo_) return J_->final_state()[0];
        return J_->component(0, std::log(r));
    }

    ModeProblem P_;
    double r_lo_ = 1e-6;
    double r_zero_ = 0, r_left_ = 0, r_right_ = 0, Cb_ = 0;
    std::shared_ptr<detail::Antiderivative> left_, right_;
    std::shared_ptr<OdeTrajectory> bridge_, f_, J_;
};

inline FundamentalPair fundamental_pair(const ModeProblem& P) { return FundamentalPair(P); }

struct ModeSolution {
    FundamentalPair pair;
    std::shared_ptr<OdeTrajectory> A;  // int_0^r s g1 f ds in x = log r
    std::shared_ptr<OdeTrajectory> B;  // int s g2 f ds, from 0 (modes 0, 1) or to r_max
    double alpha = 0;
    double A_lo = 0, B_lo = 0;
    double rhs_scale = 0;
    double boundary = 0;
    double certificate = 0;
    bool zero = false;

    double operator()(double r) const {
        if (zero) return 0.0;
        const double W = pair.wronskian();
        const double r_lo = pair.r_lo();
        if (r < r_lo) r = r_lo;
        const double x = std::log(r);
        const double a = A->component(0, x), b = B->component(0, x);
        if (pair.problem().mode <= 1) return (pair.g2(r) * a - pair.g1(r) * b) / W;
        return (pair.g2(r) * a + pair.g1(r) * b) / W + alpha * pair.g1(r);
    }

    double bound(double r) const {
        const int l = pair.problem().mode;
        if (l == 0) return rhs_scale * std::log(2 + r);
        if (l == 1) return rhs_scale * (1 + r);
        return std::abs(boundary) * std::pow(r / pair.problem().r_max, l) + rhs_scale / (l * l);
    }
};

class GrowthBoundViolated : public std::runtime_error {
public:
    explicit GrowthBoundViolated(double ratio) : std::runtime_error("growth bound violated"), ratio(ratio) {}
    double ratio;
};

// Variation of parameters for L g = rhs with the mode operator above.
inline ModeSolution mode_solve(const ModeProblem& P, const std::function<double(double)>& rhs, double boundary,
                               int certificate_points = 400) {
    ModeSolution S{FundamentalPair(P)};
    const FundamentalPair& G = S.pair;
    const int l = P.mode;
    const double r_lo = G.r_lo(), x_lo = std::log(r_lo), x_hi = std::log(P.r_max);
    S.boundary = boundary;
    for (int i = 0; i <= certificate_points; ++i) {
        double r = std::exp(x_lo + (x_hi - x_lo) * i / certificate_points);
        S.rhs_scale = std::max(S.rhs_scale, std::abs(rhs(r)) * std::pow(1 + r, P.rhs_decay));
    }
    if (S.rhs_scale == 0 && boundary == 0) {
        S.zero = true;
        return S;
    }
    const auto spec = detail::kernel_ode_spec();
    auto rate_A = [&](double x, const OdeState&, OdeState& d) {
        double r = std::exp(x);
        d[0] = r * r * G.g1(r) * rhs(r);
    };
    auto rate_B = [&](double x, const OdeState&, OdeState& d) {
        double r = std::exp(x);
        d[0] = r * r * G.g2(r) * rhs(r);
    };
    // contributions of (0, r_lo) from the leading power of each solution
    const double p1 = l, p2 = l == 0 ? 0.0 : -static_cast<double>(l);
    S.A_lo = r_lo * r_lo * G.g1(r_lo) * rhs(r_lo) / (p1 + 2);
    S.A = std::make_shared<OdeTrajectory>(ode_integrate(rate_A, x_lo, {S.A_lo}, x_hi, spec));
    if (l <= 1) {
        S.B_lo = r_lo * r_lo * G.g2(r_lo) * rhs(r_lo) / (p2 + 2);
        S.B = std::make_shared<OdeTrajectory>(ode_integrate(rate_B, x_lo, {S.B_lo}, x_hi, spec));
    } else {
        // B(x) = int_x^{x_hi}, integrated backward
        auto rate_B_rev = [&](double x, const OdeState& y, OdeState& d) {
            rate_B(x, y, d);
            d[0] = -d[0];
        };
        S.B = std::make_shared<OdeTrajectory>(ode_integrate(rate_B_rev, x_hi, {0.0}, x_lo, spec));
        const double gm = G.g1(P.r_max);
        S.alpha = (boundary - G.g2(P.r_max) * S.A->final_state()[0] / G.wronskian()) / gm;
    }
    double worst = 0;
    for (int i = 0; i <= certificate_points; ++i) {
        double r = std::exp(x_lo + (x_hi - x_lo) * i / certificate_points);
        double b = S.bound(r), g = std::abs(S(r));
        if (b > 0)
            worst = std::max(worst, g / b);
        else if (g > 0)
            worst = std::numeric_limits<double>::infinity();
    }
    S.certificate = worst;
    if (worst > 50) throw GrowthBoundViolated(worst);
    return S;
}

// e^xi = (e^u - e^v)/(u - v), continuous at u = v.
inline double mean_value_exponent(double u, double v) {
    double w = u - v;
    if (w == 0) return std::exp(v);
    return std::exp(v) * std::expm1(w) / w;
}

struct EigenResult {
    double value = 0;
    double coarse = 0;
    double shift = 0;
    int mesh = 0;
};

namespace detail {

// Symmetric tridiagonal (diag d, off e) smallest eigenvalue by Sturm bisection.
inline double sturm_smallest(const std::vector<double>& d, const std::vector<double>& e) {
    const size_t n = d.size();
    double lo = d[0], hi = d[0];
    for (size_t i = 0; i < n; ++i) {
        double rad = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i + 1 < n ? std::abs(e[i]) : 0.0);
        lo = std::min(lo, d[i] - rad);
        hi = std::max(hi, d[i] + rad);
    }
    auto count_below = [&](double x) {
        int cnt = 0;
        double q = d[0] - x;
        if (q < 0) ++cnt;
        for (size_t i = 1; i < n; ++i) {
            if (q == 0) q = 1e-300;
            q = d[i] - x - e[i - 1] * e[i - 1] / q;
            if (q < 0) ++cnt;
        }
        return cnt;
    };
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (count_below(mid) >= 1)
            hi = mid;
        else
            lo = mid;
        if (hi - lo <= 1e-14 * std::max(1.0, std::abs(mid))) break;
    }
    return 0.5 * (lo + hi);
}

inline double fv_eigenvalue(const std::function<double(double)>& V, int mode, int n) {
    std::vector<double> r(n + 1);
    for (int i = 0; i <= n; ++i) r[i] = 1 - std::cos(pi * i / (2.0 * n));
    const int first = mode == 0 ? 0 : 1;
    std::vector<double> K, M, off;
    for (int i = first; i < n; ++i) {
        double rm = i == 0 ? 0.0 : 0.5 * (r[i] + r[i - 1]);
        double rp = 0.5 * (r[i] + r[i + 1]);
        double cp = rp / (r[i + 1] - r[i]);
        double cm = i == 0 ? 0.0 : rm / (r[i] - r[i - 1]);
        double mass = 0.5 * (rp * rp - rm * rm);
        double angular = (mode == 0 || i == 0) ? 0.0 : mode * mode * std::log(rp / rm);
        K.push_back(cp + cm + angular - V(r[i]) * mass);
        M.push_back(mass);
        if (i + 1 < n) off.push_back(-cp);
    }
    std::vector<double> d(K.size()), e(off.size());
    for (size_t i = 0; i < K.size(); ++i) d[i] = K[i] / M[i];
    for (size_t i = 0; i < off.size(); ++i) e[i] = off[i] / std::sqrt(M[i] * M[i + 1]);
    return sturm_smallest(d, e);
}

}  // namespace detail

// Smallest eigenvalue of -g'' - g'/r - (lambda r^{2N} e^u - m^2/r^2) g with
// g(1) = 0, finite-volume on the graded mesh r_i = 1 - cos(pi i / 2n).
// Second-order values on n/2, n, 2n cells are Richardson-extrapolated twice;
// the gap between the two extrapolants is the refinement shift.
inline EigenResult principal_eigenvalue(const RadialProfile& profile, int mode, int n = 512,
                                        double residual_tol = 1e-6) {
    if (mode < 0) throw std::invalid_argument("principal_eigenvalue: mode must be >= 0");
    if (n < 16) throw std::invalid_argument("principal_eigenvalue: mesh too small");
    if (profile_residual(profile) > residual_tol) throw std::runtime_error("not a radial solution");
    auto V = [&](double r) { return profile.potential(r); };
    const double e0 = detail::fv_eigenvalue(V, mode, n / 2);
    const double e1 = detail::fv_eigenvalue(V, mode, n);
    const double e2 = detail::fv_eigenvalue(V, mode, 2 * n);
    EigenResult out;
    out.mesh = 2 * n;
    out.coarse = (4 * e1 - e0) / 3;
    out.value = (4 * e2 - e1) / 3;
    out.shift = std::abs(out.value - out.coarse);
    if (out.shift > 1e-3) throw std::runtime_error("unresolved spectrum");
    return out;
}

}  // namespace liouville_lab
