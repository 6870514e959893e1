#include "catch_amalgamated.hpp"
#include "liouville_lab/numerics.hpp"

#include <random>

using namespace liouville_lab;
using Catch::Approx;

TEST_CASE("plane quadrature of zero integrand is zero") {
    QuadratureSpec spec;
    auto r = integrate_plane([](cplx) { return 0.0; }, spec);
    CHECK(r.value == 0.0);
}

TEST_CASE("plane quadrature second moment of the standard bubble kernel") {
    QuadratureSpec spec;
    auto r = integrate_plane(
        [](cplx z) {
            double q = 1 + std::norm(z) / 8;
            return z.real() * z.real() / (q * q * q);
        },
        spec);
    CHECK(std::abs(r.value - 16 * pi) <= 1e-7 * 16 * pi);
}

TEST_CASE("plane quadrature of bubble density against closed form and Riemann sum") {
    QuadratureSpec spec;
    auto f = [](cplx z) {
        double q = 1 + std::norm(z) / 8;
        return 1.0 / (q * q);
    };
    double v = integrate_plane(f, spec).value;
    CHECK(std::abs(v - 8 * pi) <= 1e-7 * 8 * pi);
    // midpoint rule in r with analytic tail beyond R
    double R = 400, sum = 0;
    int n = 400000;
    for (int i = 0; i < n; ++i) {
        double r = (i + 0.5) * R / n;
        double q = 1 + r * r / 8;
        sum += 2 * pi * r / (q * q) * (R / n);
    }
    sum += 8 * pi / (1 + R * R / 8);
    CHECK(std::abs(v - sum) <= 1e-5 * sum);
}

TEST_CASE("plane quadrature is rotation invariant") {
    QuadratureSpec spec;
    auto make = [](double a) {
        return [a](cplx z) {
            cplx w = z * std::polar(1.0, a);
            double q = 1 + std::norm(w - cplx(0.5, 0.2)) / 8;
            return (1 + w.real() * 0.3) / (q * q * q);
        };
    };
    double base = integrate_plane(make(0.0), spec).value;
    for (double a : {0.3, 1.1, 2.5}) {
        double v = integrate_plane(make(a), spec).value;
        CHECK(std::abs(v - base) <= 10 * spec.rel_tol * std::abs(base));
    }
}

TEST_CASE("quadrature budget error carries partial value") {
    QuadratureSpec spec;
    spec.max_subdivisions = 8;
    spec.rel_tol = 1e-14;
    spec.abs_tol = 1e-15;
    try {
        integrate_interval([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, spec);
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
        CHECK(std::string(e.what()) == "quadrature budget exceeded");
        CHECK(std::isfinite(e.partial_value));
        CHECK(e.error_estimate > 0);
    }
}

TEST_CASE("QuadratureSpec invariants") {
    QuadratureSpec s;
    s.max_subdivisions = 4;
    CHECK_THROWS(s.validate());
    s = QuadratureSpec{};
    s.rel_tol = 0;
    CHECK_THROWS(s.validate());
}

TEST_CASE("disk and annulus quadrature") {
    QuadratureSpec spec;
    auto one = [](cplx) { return 1.0; };
    CHECK(integrate_disk(one, cplx(1, 2), 0.5, spec).value == Approx(pi * 0.25).epsilon(1e-10));
    CHECK(integrate_annulus(one, 0.0, 1.0, 2.0, spec).value == Approx(3 * pi).epsilon(1e-10));
    auto x2 = [](cplx z) { return z.real() * z.real(); };
    CHECK(integrate_disk(x2, 0.0, 1.0, spec).value == Approx(pi / 4).epsilon(1e-10));
}

TEST_CASE("circle_fourier orthogonality") {
    auto s = sample_circle([](cplx z) { return std::cos(2 * std::arg(z)); }, 0.0, 1.0, 64);
    auto c = circle_fourier(s, 4);
    for (int n = 0; n <= 4; ++n) {
        CHECK(std::abs(c.a[n] - (n == 2 ? 1.0 : 0.0)) <= 1e-12);
        CHECK(std::abs(c.b[n]) <= 1e-12);
    }
    auto s2 = sample_circle([](cplx z) { return 3 + std::sin(std::arg(z)); }, 0.0, 2.0, 32);
    auto c2 = circle_fourier(s2, 4);
    CHECK(c2.a[0] == Approx(3).epsilon(1e-14));
    CHECK(c2.b[1] == Approx(1).epsilon(1e-14));
}

TEST_CASE("circle_fourier ignores modes above truncation") {
    std::vector<double> s(64);
    for (int k = 0; k < 64; ++k) s[k] = std::cos(5 * 2 * pi * k / 64);
    auto c = circle_fourier(s, 2);
    // direct DFT oracle
    for (int n = 0; n <= 2; ++n) {
        double dc = 0, ds = 0;
        for (int k = 0; k < 64; ++k) {
            dc += s[k] * std::cos(n * 2 * pi * k / 64);
            ds += s[k] * std::sin(n * 2 * pi * k / 64);
        }
        CHECK(std::abs(c.a[n]) <= 1e-12);
        CHECK(std::abs(c.b[n]) <= 1e-12);
        CHECK(std::abs(dc) <= 1e-12);
        CHECK(std::abs(ds) <= 1e-12);
    }
}

TEST_CASE("circle_fourier Nyquist violation") {
    std::vector<double> s(10, 1.0);
    CHECK_THROWS_WITH(circle_fourier(s, 3), "Nyquist violation");
}

TEST_CASE("Fourier analysis then synthesis reproduces band-limited data") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1, 1);
    FourierCoefficients c(6);
    for (int n = 0; n <= 6; ++n) {
        c.a[n] = u(rng);
        if (n > 0) c.b[n] = u(rng);
    }
    auto s = fourier_synthesis(c, 48);
    auto back = fourier_synthesis(circle_fourier(s, 12), 48);
    for (size_t k = 0; k < s.size(); ++k) CHECK(std::abs(back[k] - s[k]) <= 1e-10);
}

TEST_CASE("PolarGrid invariants") {
    CHECK_NOTHROW(PolarGrid::uniform({0.0, 0.5, 1.0}, 8));
    CHECK_THROWS(PolarGrid::uniform({0.5, 0.5}, 8));
    CHECK_THROWS(PolarGrid::uniform({0.5}, 5));
}

namespace {
auto log_rhs = [](double r, const OdeState& y, OdeState& d) {
    d[0] = y[1];
    d[1] = -y[1] / r;
};
}

TEST_CASE("ode_integrate reproduces the logarithm") {
    QuadratureSpec spec;
    spec.rel_tol = 1e-11;
    spec.abs_tol = 1e-13;
    auto tr = ode_integrate(log_rhs, 1.0, {0.0, 1.0}, 10.0, spec);
    for (double r : {1.5, 2.0, 3.7, 7.0, 10.0}) CHECK(std::abs(tr.component(0, r) - std::log(r)) <= 1e-9);
}

TEST_CASE("ode_integrate mode-0 kernel equation") {
    const double c = 1.0 / 8;
    auto rhs = [c](double r, const OdeState& y, OdeState& d) {
        double q = 1 + c * r * r;
        d[0] = y[1];
        d[1] = -y[1] / r - 8 * c / (q * q) * y[0];
    };
    auto g = [c](double r) { return (1 - c * r * r) / (1 + c * r * r); };
    auto gp = [c](double r) { return -4 * c * r / ((1 + c * r * r) * (1 + c * r * r)); };
    QuadratureSpec spec;
    spec.rel_tol = 1e-11;
    spec.abs_tol = 1e-13;
    auto tr = ode_integrate(rhs, 0.1, {g(0.1), gp(0.1)}, 20.0, spec);
    for (double r : {0.5, 1.0, 2.8, 5.0, 12.0, 20.0}) CHECK(std::abs(tr.component(0, r) - g(r)) <= 1e-8);
}

TEST_CASE("ode_integrate zero field keeps state constant") {
    QuadratureSpec spec;
    auto tr = ode_integrate([](double, const OdeState&, OdeState& d) { d.assign(d.size(), 0.0); }, 0.0,
                            {1.5, -2.0}, 3.0, spec);
    CHECK(tr.final_state()[0] == 1.5);
    CHECK(tr.final_state()[1] == -2.0);
    CHECK(tr.component(1, 1.234) == -2.0);
}

TEST_CASE("ode_integrate tighter tolerance reduces the error") {
    double prev = 0;
    for (double tol : {1e-6, 1e-7, 1e-8, 1e-9}) {
        QuadratureSpec spec;
        spec.rel_tol = tol;
        spec.abs_tol = tol * 1e-2;
        auto tr = ode_integrate(log_rhs, 1.0, {0.0, 1.0}, 10.0, spec);
        double err = std::abs(tr.final_state()[0] - std::log(10.0));
        if (prev > 0) CHECK(prev / err >= 4.0);
        prev = err;
    }
}

TEST_CASE("ode_integrate reports singular fields") {
    QuadratureSpec spec;
    auto blow = [](double, const OdeState& y, OdeState& d) { d[0] = y[0] * y[0]; };
    CHECK_THROWS_WITH(ode_integrate(blow, 0.0, {1.0}, 2.0, spec), "stiff or singular ODE");
}

TEST_CASE("ode_integrate runs backward") {
    QuadratureSpec spec;
    spec.rel_tol = 1e-11;
    spec.abs_tol = 1e-13;
    auto tr = ode_integrate(log_rhs, 10.0, {std::log(10.0), 0.1}, 1.0, spec);
    CHECK(std::abs(tr.component(0, 2.0) - std::log(2.0)) <= 1e-9);
    CHECK(std::abs(tr.derivative(0, 2.0) - 0.5) <= 1e-7);
}

TEST_CASE("fd_check certifies analytic gradients") {
    auto sq = [](cplx y) { return std::norm(y); };
    auto r1 = fd_check(sq, cplx(1, 1), cplx(2, 2));
    CHECK(r1.slope >= 1.8);
    CHECK(r1.slope <= 2.2);
    auto lg = [](cplx y) { return std::log(std::abs(y)); };
    auto r2 = fd_check(lg, cplx(2, 0), cplx(0.5, 0));
    CHECK(r2.slope >= 1.8);
    CHECK(r2.slope <= 2.2);
    CHECK_FALSE(r2.exact);
    CHECK_THROWS_WITH(fd_check(sq, cplx(1, 1), cplx(0, 0)), "gradient mismatch");
}

TEST_CASE("root finders") {
    double x = newton_root([](double t) { return std::make_pair(t * t - 2, 2 * t); }, 1.0, 0.0, 2.0);
    CHECK(x == Approx(std::sqrt(2.0)).epsilon(1e-14));
    double y = bisect_root([](double t) { return std::cos(t); }, 1.0, 2.0);
    CHECK(y == Approx(pi / 2).epsilon(1e-13));
}

TEST_CASE("svd diagnostics") {
    Eigen::MatrixXd A(2, 2);
    A << 3, 0, 0, 0.5;
    auto d = svd_diagnostics(A);
    CHECK(d.sigma_min == Approx(0.5));
    CHECK(d.cond == Approx(6));
}
