#pragma once

#include "liouville_lab/quadrature.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <functional>
#include <utility>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace liouville_lab {

using OdeState = std::vector<double>;

class OdeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Accepted steps with derivatives and a midpoint sample per step; evaluation
// uses quintic Hermite interpolation on the nodes {start, mid, end}.
struct OdeTrajectory {
    std::vector<double> r;
    std::vector<OdeState> y;
    std::vector<OdeState> dy;
    std::vector<OdeState> y_mid;
    std::vector<OdeState> dy_mid;

    double r_begin() const { return r.front(); }
    double r_end() const { return r.back(); }
    const OdeState& final_state() const { return y.back(); }

    OdeState operator()(double x) const {
        OdeState out(y.front().size());
        for (size_t c = 0; c < out.size(); ++c) out[c] = component(c, x);
        return out;
    }

    double component(size_t c, double x) const { return eval(c, x).first; }
    double derivative(size_t c, double x) const { return eval(c, x).second; }

private:
    std::pair<double, double> eval(size_t c, double x) const {
        if (r.size() < 2) throw std::logic_error("OdeTrajectory: empty trajectory");
        const bool forward = r.back() > r.front();
        double lo = std::min(r.front(), r.back()), hi = std::max(r.front(), r.back());
        double tol = 1e-12 * std::max(1.0, std::abs(hi));
        if (x < lo - tol || x > hi + tol) throw std::domain_error("OdeTrajectory: evaluation outside trajectory");
        size_t i;
        auto it = forward ? std::upper_bound(r.begin(), r.end(), x)
                          : std::upper_bound(r.begin(), r.end(), x, std::greater<double>());
        i = it == r.begin() ? 0 : static_cast<size_t>(it - r.begin()) - 1;
        i = std::min(i, r.size() - 2);
        const double h = r[i + 1] - r[i];
        if (h == 0) return {y[i][c], dy[i][c]};
        const double s = (x - r[i]) / h;
        // Newton divided differences on nodes 0,0,1/2,1/2,1,1 in s.
        const double z[6] = {0, 0, 0.5, 0.5, 1, 1};
        const double fv[3] = {y[i][c], y_mid[i][c], y[i + 1][c]};
        const double fd[3] = {dy[i][c] * h, dy_mid[i][c] * h, dy[i + 1][c] * h};
        double t[6];
        for (int k = 0; k < 6; ++k) t[k] = fv[k / 2];
        double coef[6];
        coef[0] = t[0];
        for (int lvl = 1; lvl < 6; ++lvl) {
            for (int k = 5; k >= lvl; --k) {
                if (lvl == 1 && (k % 2 == 1))
                    t[k] = fd[k / 2];
                else
                    t[k] = (t[k] - t[k - 1]) / (z[k] - z[k - lvl]);
            }
            coef[lvl] = t[lvl];
        }
        double p = coef[5], dp = 0;
        for (int k = 4; k >= 0; --k) {
            dp = dp * (s - z[k]) + p;
            p = p * (s - z[k]) + coef[k];
        }
        return {p, dp / h};
    }
};

// Adaptive Dormand-Prince 5(4) from r0 to r_end (either direction).
// rhs(r, y, dydr).
template <class Rhs>
OdeTrajectory ode_integrate(Rhs&& rhs, double r0, OdeState y0, double r_end, const QuadratureSpec& spec,
                            double first_step = 0.0, long max_steps = 2000000) {
    namespace odeint = boost::numeric::odeint;
    spec.validate();
    OdeTrajectory traj;
    auto sys = [&](const OdeState& x, OdeState& dxdt, double t) { rhs(t, x, dxdt); };
    OdeState d(y0.size());
    sys(y0, d, r0);
    traj.r.push_back(r0);
    traj.y.push_back(y0);
    traj.dy.push_back(d);
    if (r_end == r0) {
        traj.r.push_back(r0);
        traj.y.push_back(y0);
        traj.dy.push_back(d);
        traj.y_mid.push_back(y0);
        traj.dy_mid.push_back(d);
        return traj;
    }
    odeint::runge_kutta_dopri5<OdeState> half;
    OdeState xm, dm(y0.size());
    const double dir = r_end > r0 ? 1.0 : -1.0;
    const double span = std::abs(r_end - r0);
    auto stepper = odeint::make_controlled(spec.abs_tol, spec.rel_tol, odeint::runge_kutta_dopri5<OdeState>());
    double t = r0;
    double dt = dir * (first_step > 0 ? first_step : span * 1e-4);
    OdeState x = y0;
    for (long n = 0; n < max_steps; ++n) {
        double remaining = r_end - t;
        if (std::abs(dt) > std::abs(remaining)) dt = remaining;
        const double floor_dt = 1e-14 * std::max(1.0, std::abs(t));
        if (std::abs(dt) < floor_dt) throw OdeError("stiff or singular ODE");
        const bool last = dt == remaining;
        const double t_prev = t;
        xm = x;
        if (stepper.try_step(sys, x, t, dt) == odeint::success) {
            if (last) t = r_end;
            for (double v : x)
                if (!std::isfinite(v)) throw OdeError("stiff or singular ODE");
            const double h = t - t_prev;
            half.reset();
            half.do_step(sys, xm, t_prev, 0.5 * h);
            sys(xm, dm, t_prev + 0.5 * h);
            traj.y_mid.push_back(xm);
            traj.dy_mid.push_back(dm);
            sys(x, d, t);
            traj.r.push_back(t);
            traj.y.push_back(x);
            traj.dy.push_back(d);
            if (last || t == r_end) return traj;
        }
    }
    throw OdeError("stiff or singular ODE");
}

}  // namespace liouville_lab
