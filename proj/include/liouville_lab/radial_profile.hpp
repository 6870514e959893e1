#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace liouville_lab {

// Radial sample of u'' + u'/r + lambda r^{2N} e^u = 0 on (0, 1].
struct RadialProfile {
    int N = 0;
    double lambda = 0;
    double b = 0;
    std::vector<double> r_grid;
    std::vector<double> u;
    std::vector<double> u_prime;

    void validate_shape() const {
        if (r_grid.size() < 3 || u.size() != r_grid.size() || u_prime.size() != r_grid.size())
            throw std::invalid_argument("RadialProfile: inconsistent sample sizes");
        for (size_t i = 1; i < r_grid.size(); ++i)
            if (!(r_grid[i] > r_grid[i - 1])) throw std::invalid_argument("RadialProfile: grid not ascending");
        if (r_grid.front() < 0 || r_grid.back() > 1 + 1e-15)
            throw std::invalid_argument("RadialProfile: grid must lie in [0, 1]");
    }

    double u_center() const { return u.front(); }

    // Cubic Hermite interpolation of (u, u').
    double value(double r) const { return interp(r).first; }
    double slope(double r) const { return interp(r).second; }

    double potential(double r) const {
        double w = N == 0 ? 1.0 : std::pow(r, 2 * N);
        return lambda * w * std::exp(value(r));
    }

private:
    std::pair<double, double> interp(double r) const {
        if (r < r_grid.front() - 1e-14 || r > r_grid.back() + 1e-14)
            throw std::domain_error("RadialProfile: evaluation outside grid");
        auto it = std::upper_bound(r_grid.begin(), r_grid.end(), r);
        size_t i = it == r_grid.begin() ? 0 : static_cast<size_t>(it - r_grid.begin()) - 1;
        i = std::min(i, r_grid.size() - 2);
        double h = r_grid[i + 1] - r_grid[i], s = (r - r_grid[i]) / h;
        double s2 = s * s, s3 = s2 * s;
        double v = (2 * s3 - 3 * s2 + 1) * u[i] + (s3 - 2 * s2 + s) * h * u_prime[i] +
                   (-2 * s3 + 3 * s2) * u[i + 1] + (s3 - s2) * h * u_prime[i + 1];
        double d = ((6 * s2 - 6 * s) * u[i] + (-6 * s2 + 6 * s) * u[i + 1]) / h +
                   (3 * s2 - 4 * s + 1) * u_prime[i] + (3 * s2 - 2 * s) * u_prime[i + 1];
        return {v, d};
    }
};

// Max over the grid of |r u'(r) + lambda int_0^r s^{2N+1} e^u ds|, the
// integrated form of the radial equation. Composite Simpson per cell with
// Hermite midpoints.
inline double profile_residual(const RadialProfile& P) {
    P.validate_shape();
    auto g = [&](double s) { return P.lambda * (P.N == 0 ? s : std::pow(s, 2 * P.N + 1)) * std::exp(P.value(s)); };
    double acc = 0;
    double worst = std::abs(P.r_grid[0] * P.u_prime[0]);
    if (P.r_grid[0] > 0) {
        // integrand ~ s^{2N+1} on the first cell
        double r0 = P.r_grid[0];
        acc = g(r0) * r0 / (2 * P.N + 2);
        worst = std::abs(r0 * P.u_prime[0] + acc);
    }
    for (size_t i = 1; i < P.r_grid.size(); ++i) {
        double a = P.r_grid[i - 1], b = P.r_grid[i];
        acc += (b - a) / 6 * (g(a) + 4 * g(0.5 * (a + b)) + g(b));
        worst = std::max(worst, std::abs(b * P.u_prime[i] + acc));
    }
    return worst;
}

}  // namespace liouville_lab
