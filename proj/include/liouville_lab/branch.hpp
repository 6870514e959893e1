#pragma once

#include "liouville_lab/kernels.hpp"
#include "liouville_lab/radial_profile.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace liouville_lab {

inline constexpr int radial_grid_cells = 2000;

inline double branch_lambda(int N, double b) {
    double n1 = N + 1.0;
    return n1 * n1 * 8 * b / ((1 + b) * (1 + b));
}

inline RadialProfile closed_form_profile(int N, double b) {
    if (!(b > 0)) throw std::invalid_argument("closed_form_profile: b must be positive");
    if (N < 0) throw std::invalid_argument("closed_form_profile: N must be >= 0");
    RadialProfile P;
    P.N = N;
    P.b = b;
    P.lambda = branch_lambda(N, b);
    const int k = 2 * N + 2;
    for (int i = 0; i <= radial_grid_cells; ++i) {
        double r = static_cast<double>(i) / radial_grid_cells;
        double t = b * std::pow(r, k);
        P.r_grid.push_back(r);
        P.u.push_back(2 * std::log1p(b) - 2 * std::log1p(t));
        P.u_prime.push_back(i == 0 ? 0.0 : -2 * k * t / (r * (1 + t)));
    }
    P.u.back() = 0.0;
    return P;
}

namespace detail {

inline QuadratureSpec radial_ode_spec() {
    QuadratureSpec s;
    s.rel_tol = 1e-13;
    s.abs_tol = 1e-14;
    return s;
}

inline constexpr double radial_launch = 1e-4;

// State (u, u', v, v') with v = du/du(0); launched from the series at r = 1e-4.
inline OdeTrajectory radial_ivp(int N, double lambda, double u0, double r_end) {
    const double k = 2.0 * N + 2;
    const double r0 = radial_launch;
    const double A = lambda * std::exp(u0);
    const double rk = std::pow(r0, k);
    OdeState y0{u0 - A * rk / (k * k), -A * rk / (k * r0), 1 - A * rk / (k * k), -A * rk / (k * r0)};
    auto rhs = [N, lambda](double r, const OdeState& y, OdeState& d) {
        double w = lambda * (N == 0 ? 1.0 : std::pow(r, 2 * N)) * std::exp(y[0]);
        d[0] = y[1];
        d[1] = -y[1] / r - w;
        d[2] = y[3];
        d[3] = -y[3] / r - w * y[2];
    };
    return ode_integrate(rhs, r0, y0, r_end, radial_ode_spec());
}

inline RadialProfile sample_ivp(int N, double lambda, double u0) {
    auto tr = radial_ivp(N, lambda, u0, 1.0);
    RadialProfile P;
    P.N = N;
    P.lambda = lambda;
    P.b = std::expm1(u0 / 2);
    const double k = 2.0 * N + 2;
    const double A = lambda * std::exp(u0);
    for (int i = 0; i <= radial_grid_cells; ++i) {
        double r = static_cast<double>(i) / radial_grid_cells;
        P.r_grid.push_back(r);
        if (r < radial_launch) {
            double rk = std::pow(r, k);
            P.u.push_back(u0 - A * rk / (k * k));
            P.u_prime.push_back(r == 0 ? 0.0 : -A * rk / (k * r));
        } else {
            P.u.push_back(tr.component(0, r));
            P.u_prime.push_back(tr.component(1, r));
        }
    }
    return P;
}

}  // namespace detail

class NoRadialSolution : public std::runtime_error {
public:
    NoRadialSolution() : std::runtime_error("no radial solution found at this λ/guess") {}
};

// Newton on u(1; u(0)) = 0 with the variational equation supplying the slope.
inline RadialProfile shoot_radial(int N, double lambda, double u_center_guess) {
    if (!(lambda > 0)) throw std::invalid_argument("shoot_radial: lambda must be positive");
    double u0 = u_center_guess;
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
        OdeState end;
        try {
            end = detail::radial_ivp(N, lambda, u0, 1.0).final_state();
        } catch (const OdeError&) {
            throw NoRadialSolution();
        }
        if (!(end[2] != 0) || !std::isfinite(end[0])) throw NoRadialSolution();
        double step = end[0] / end[2];
        step = std::clamp(step, -2.0, 2.0);
        u0 -= step;
        // residual test also covers the double root at the fold
        if (std::abs(end[0]) <= 1e-13 || std::abs(step) <= 1e-13) {
            ok = true;
            break;
        }
    }
    if (!ok) throw NoRadialSolution();
    return detail::sample_ivp(N, lambda, u0);
}

struct BranchPoint {
    RadialProfile profile;
    double u_center = 0;
    double mass = 0;
    double harnack_sup = 0;
    double mode_eigenvalue = std::numeric_limits<double>::quiet_NaN();
};

struct BranchReport {
    int N = 0;
    std::vector<BranchPoint> points;
    double fold_b = 0;
    double fold_lambda = 0;
};

inline double profile_mass(const RadialProfile& P) {
    QuadratureSpec spec;
    spec.rel_tol = 1e-10;
    auto f = [&](double r) { return (P.N == 0 ? r : std::pow(r, 2 * P.N + 1)) * std::exp(P.value(r)); };
    // breakpoints near the bubble ring when it lies inside the disk
    std::vector<double> br;
    if (P.b > 1) {
        double ring = std::pow(P.b, -1.0 / (2 * P.N + 2));
        for (double s : {0.25, 0.5, 1.0, 2.0}) br.push_back(ring * s);
    }
    return 2 * pi * P.lambda * integrate_interval(f, 0.0, 1.0, spec, br).value;
}

// sup over r > 0 of u + log(lambda) + 2(N+1) log r along the radial IVP from
// the profile's center value, continued past r = 1 when the maximum lies
// outside the disk.
struct HarnackSup {
    double value = 0;
    double r_star = 0;
};

inline HarnackSup harnack_location(const BranchPoint& pt) {
    const RadialProfile& P = pt.profile;
    const double k = 2.0 * P.N + 2;
    const double loglam = std::log(P.lambda);
    double r_end = 1.0;
    for (int tries = 0; tries < 40; ++tries, r_end *= 2) {
        OdeTrajectory tr = detail::radial_ivp(P.N, P.lambda, P.u_center(), r_end);
        if (tr.final_state()[1] * r_end + k >= 0) continue;
        auto g = [&](double r) { return tr.component(0, r) + loglam + k * std::log(r); };
        const double r0 = detail::radial_launch;
        const int M = 800;
        // log-spaced scan, then Brent on the bracketing cells
        auto node = [&](int i) { return r0 * std::pow(r_end / r0, static_cast<double>(i) / M); };
        int best = 0;
        for (int i = 1; i <= M; ++i)
            if (g(node(i)) > g(node(best))) best = i;
        double lo = node(std::max(best - 1, 0)), hi = node(std::min(best + 1, M));
        auto m = boost::math::tools::brent_find_minima([&](double r) { return -g(r); }, lo, hi, 52);
        return {-m.second, m.first};
    }
    throw std::runtime_error("harnack_diagnostic: maximum not bracketed");
}

inline double harnack_diagnostic(const BranchPoint& pt) { return harnack_location(pt).value; }

inline BranchPoint make_branch_point(RadialProfile P, bool with_eigen = true) {
    BranchPoint pt;
    pt.u_center = P.u_center();
    pt.profile = std::move(P);
    pt.mass = profile_mass(pt.profile);
    pt.harnack_sup = harnack_diagnostic(pt);
    if (with_eigen) {
        try {
            pt.mode_eigenvalue = principal_eigenvalue(pt.profile, pt.profile.N + 1).value;
        } catch (const std::runtime_error&) {
        }
    }
    return pt;
}

// Fold of the branch from the lambda = 1 shooting map: solutions with
// u(0) = u0 at parameter lambda correspond to s = u0 + log(lambda) through
// lambda = exp(U(1; s)), U the lambda = 1 solution with U(0) = s.
inline std::pair<double, double> locate_fold(int N, double b_lo, double b_hi) {
    auto s_of_b = [N](double b) { return 2 * std::log1p(b) + std::log(branch_lambda(N, b)); };
    auto neg_loglam = [N](double s) { return -detail::radial_ivp(N, 1.0, s, 1.0).final_state()[0]; };
    auto m = boost::math::tools::brent_find_minima(neg_loglam, s_of_b(b_lo), s_of_b(b_hi), 52);
    const double lam = std::exp(-m.second);
    const double u0 = m.first - std::log(lam);
    return {std::expm1(u0 / 2), lam};
}

inline BranchReport trace_branch(int N, const std::vector<double>& b_values, bool with_eigen = true) {
    if (b_values.empty()) throw std::invalid_argument("trace_branch: no b values");
    for (size_t i = 1; i < b_values.size(); ++i)
        if (!(b_values[i] > b_values[i - 1])) throw std::invalid_argument("trace_branch: b values must ascend");
    BranchReport rep;
    rep.N = N;
    for (double b : b_values) rep.points.push_back(make_branch_point(closed_form_profile(N, b), with_eigen));
    if (b_values.front() < 1 && b_values.back() > 1) {
        auto [bf, lf] = locate_fold(N, b_values.front(), b_values.back());
        rep.fold_b = bf;
        rep.fold_lambda = lf;
    }
    return rep;
}

inline void write_branch_csv(std::ostream& os, const BranchReport& rep) {
    os << "b,lambda,u_center,mass,harnack_sup\n";
    os << std::setprecision(17);
    for (const auto& pt : rep.points)
        os << pt.profile.b << ',' << pt.profile.lambda << ',' << pt.u_center << ',' << pt.mass << ','
           << pt.harnack_sup << '\n';
}

}  // namespace liouville_lab
