#pragma once

#include "liouville_lab/fourier.hpp"
#include "liouville_lab/ode.hpp"
#include "liouville_lab/quadrature.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace liouville_lab {

struct FdCheck {
    double slope = 0;
    bool exact = false;
    std::vector<double> steps;
    std::vector<double> errors;
};

inline cplx fd_gradient(const std::function<double(cplx)>& f, cplx y, double h) {
    double gx = (f(y + h) - f(y - h)) / (2 * h);
    double gy = (f(y + cplx(0, h)) - f(y - cplx(0, h))) / (2 * h);
    return {gx, gy};
}

inline double fd_laplacian(const std::function<double(cplx)>& f, cplx y, double h) {
    return (f(y + h) + f(y - h) + f(y + cplx(0, h)) + f(y - cplx(0, h)) - 4 * f(y)) / (h * h);
}

// Centered differences at steps 1e-2, 1e-3, 1e-4. Errors at rounding level
// carry no slope information; when every step is there the gradient is
// reported as exact with the nominal second-order slope.
inline FdCheck fd_check(const std::function<double(cplx)>& field, cplx point, cplx analytic_gradient) {
    FdCheck out;
    out.steps = {1e-2, 1e-3, 1e-4};
    const double eps = std::numeric_limits<double>::epsilon();
    const double f0 = std::abs(field(point));
    std::vector<double> lx, ly;
    for (double h : out.steps) {
        double e = std::abs(fd_gradient(field, point, h) - analytic_gradient);
        out.errors.push_back(e);
        double floor = 100 * eps * (1 + f0) / h;
        if (e > floor) {
            lx.push_back(std::log(h));
            ly.push_back(std::log(e));
        }
    }
    if (lx.size() < 2) {
        out.exact = true;
        out.slope = 2.0;
        return out;
    }
    double mx = 0, my = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= lx.size();
    my /= lx.size();
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    out.slope = sxy / sxx;
    if (out.slope < 1.5) throw std::runtime_error("gradient mismatch");
    return out;
}

// Newton with bracketing safeguard; f returns (value, derivative).
template <class F>
double newton_root(F&& f, double guess, double lo, double hi, int digits = 50, std::uintmax_t max_iter = 200) {
    std::uintmax_t it = max_iter;
    double x = boost::math::tools::newton_raphson_iterate(std::forward<F>(f), guess, lo, hi, digits, it);
    if (it >= max_iter) throw std::runtime_error("newton: iteration budget exhausted");
    return x;
}

template <class F>
double bisect_root(F&& f, double lo, double hi, double rel_tol = 1e-14) {
    if (f(lo) * f(hi) > 0) throw std::invalid_argument("bisect_root: root not bracketed");
    auto tol = [rel_tol](double a, double b) { return std::abs(b - a) <= rel_tol * std::max(1.0, std::abs(a)); };
    std::uintmax_t it = 400;
    auto r = boost::math::tools::bisect(std::forward<F>(f), lo, hi, tol, it);
    return 0.5 * (r.first + r.second);
}

struct SvdDiagnostics {
    double sigma_min = 0;
    double sigma_max = 0;
    double cond = 0;
};

inline SvdDiagnostics svd_diagnostics(const Eigen::MatrixXd& A) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto& s = svd.singularValues();
    SvdDiagnostics d;
    d.sigma_max = s(0);
    d.sigma_min = s(s.size() - 1);
    d.cond = d.sigma_min > 0 ? d.sigma_max / d.sigma_min : std::numeric_limits<double>::infinity();
    return d;
}

}  // namespace liouville_lab
