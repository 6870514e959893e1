#pragma once

#include "liouville_lab/branch.hpp"
#include "liouville_lab/config.hpp"
#include "liouville_lab/interaction.hpp"
#include "liouville_lab/layer.hpp"
#include "liouville_lab/maxima.hpp"
#include "liouville_lab/pohozaev.hpp"
#include "liouville_lab/report.hpp"

#include <algorithm>
#include <atomic>
#include <cfloat>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace liouville_lab {

using Entries = std::vector<ReportEntry>;

class UnknownScenario : public std::invalid_argument {
public:
    explicit UnknownScenario(const std::string& name) : std::invalid_argument("unknown scenario: " + name) {}
};

inline const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"identities", "moments", "bubble",  "farfield",        "layer-dichotomy",
                                                "interaction", "pohozaev", "branch", "conjecture-disk"};
    return names;
}

namespace detail {

inline constexpr double inf = std::numeric_limits<double>::infinity();

inline std::string str(double v) { return fmt17(v); }
inline std::string str(int v) { return std::to_string(v); }
inline std::string str(unsigned long long v) { return std::to_string(v); }
inline std::string str(cplx v) { return fmt17(v.real()) + (v.imag() < 0 ? "" : "+") + fmt17(v.imag()) + "i"; }

// Runs one check; a numerical failure becomes a failing entry that records the message.
template <class F>
void guarded(Entries& out, const std::string& id, ParamMap params, Provenance prov, F&& f) {
    try {
        f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        params["error"] = e.what();
        auto en = make_entry(id, std::move(params), std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0, prov);
        en.pass = false;
        out.push_back(std::move(en));
    }
}

inline Entries identities(const Config& cfg) {
    const int n_max = cfg.has("N") ? cfg.integer("N") : cfg.integer("n_max");
    if (n_max < 1 || n_max > 256) throw ConfigError("identities: N must lie in [1, 256]");
    const int theta_points = cfg.integer("theta_points");
    if (theta_points < 2) throw ConfigError("identities: theta_points must be >= 2");
    const auto seed = cfg.seed();
    Entries out = verify_identities(n_max, theta_points);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int N = 1; N <= n_max; ++N) {
        ParamMap p{{"N", str(N)}, {"seed", str(seed)}};
        std::vector<cplx> rhs;
        for (int l = 0; l < N; ++l) rhs.emplace_back(u(rng), u(rng));
        auto M = interaction_matrix(N);
        auto s = solve_maxima_system(N, rhs);
        out.push_back(make_bound_entry("linalg.sigma_min", p, s.sigma_min, DBL_MIN, inf, Provenance::derived));
        double dev = 0;
        for (int l = 1; l <= N; ++l) dev = std::max(dev, std::abs(s.margin[l - 1] - M.dj(l)));
        out.push_back(make_entry("linalg.margin", p, dev, 0.0, 1e-12 * M.D, Provenance::derived));
        out.push_back(make_bound_entry("linalg.residual", p, s.residual, 0.0, 1e-12 * s.cond, Provenance::derived));
        // at the roots of unity the pairwise forces sum to -2N Q_m
        auto g = oscillation_gradient(MaximaConfiguration::roots_of_unity(N, inf));
        double fb = 0;
        for (int m = 0; m <= N; ++m)
            fb = std::max(fb, std::abs(g.direct[m] + 2.0 * N * std::polar(1.0, 2 * pi * m / (N + 1))));
        out.push_back(make_entry("force.direct", {{"N", str(N)}}, fb, 0.0, 1e-12 * N * N, Provenance::derived));
    }
    return out;
}

inline Entries moments(const Config& cfg) {
    const auto spec = cfg.quadrature();
    Entries out;
    bool first = true;
    for (int N : cfg.n_values("moments_N_values"))
        for (double mu : cfg.mu_values("moments_mu_values"))
            for (double pr : cfg.reals("moments_p_values")) {
                ParamMap p{{"N", str(N)}, {"mu", str(mu)}, {"p", str(pr)}};
                guarded(out, "moments.I0", p, Provenance::paper, [&] {
                    if (N < 1) throw ConfigError("moments: N must be >= 1");
                    auto m = moment_integrals(BubbleParams{N, mu, pr, 1}, spec);
                    out.push_back(make_bound_entry("moments.I0", p, std::abs(m.I0), 0.0, 1e-6 * m.scale0,
                                                   Provenance::paper));
                    out.push_back(make_bound_entry("moments.I1", p, std::abs(m.I1), 0.0, 1e-6 * m.scale1,
                                                   Provenance::paper));
                    if (first)
                        out.push_back(make_entry("moments.I2", {}, m.I2, 16 * pi, 1e-6, Provenance::paper));
                    first = false;
                });
            }
    return out;
}

inline Entries bubble(const Config& cfg) {
    const auto spec = cfg.quadrature();
    const auto seed = cfg.seed();
    const int points = cfg.integer("random_points");
    const double mu = cfg.mu("bubble_mu");
    const double pr = cfg.real("bubble_p");
    Entries out;
    for (int N : cfg.n_values("bubble_N_values")) {
        if (N < 0) throw ConfigError("bubble: N must be >= 0");
        const BubbleParams P{N, mu, pr, 1};
        ParamMap p{{"N", str(N)}, {"mu", str(mu)}, {"p", str(pr)}};
        ParamMap ps = p;
        ps["seed"] = str(seed);
        ps["points"] = str(points);
        guarded(out, "bubble.residual", ps, Provenance::derived, [&] {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> ur(0.0, 3.0), ut(0.0, 2 * pi);
            double worst = 0;
            for (int i = 0; i < points; ++i) {
                double r = ur(rng), t = ut(rng);
                if (r > 0) worst = std::max(worst, std::abs(bubble_residual(P, std::polar(r, t))));
            }
            out.push_back(make_bound_entry("bubble.residual", ps, worst, 0.0, 1e-9, Provenance::derived));
        });
        guarded(out, "bubble.mass", p, Provenance::paper, [&] {
            out.push_back(make_entry("bubble.mass", p, total_mass(P, spec), 8 * pi * (N + 1), 1e-6, Provenance::paper));
        });
        if (N >= 1)
            guarded(out, "bubble.maxima", p, Provenance::paper, [&] {
                auto m = find_maxima(P);
                double gap = *std::max_element(m.gap.begin(), m.gap.end());
                out.push_back(make_bound_entry("bubble.maxima", p, gap, 0.0, 5 * std::norm(P.p), Provenance::paper));
            });
    }
    return out;
}

inline Entries farfield(const Config& cfg) {
    const double mu = cfg.mu("farfield_mu");
    const auto Ls = cfg.reals("farfield_L");
    Entries out;
    for (int N : cfg.n_values("farfield_N_values")) {
        if (N < 1) throw ConfigError("farfield: N must be >= 1");
        const BubbleParams P{N, mu, 0.0, 1};
        std::vector<double> gaps;
        for (double L : Ls) {
            ParamMap p{{"N", str(N)}, {"mu", str(mu)}, {"L", str(L)}};
            guarded(out, "farfield.gap", p, Provenance::derived, [&] {
                double g = 0;
                for (int k = 0; k < 64; ++k) g = std::max(g, std::abs(far_field_gap(P, {L, 2 * pi * k / 64})));
                gaps.push_back(g);
                out.push_back(make_bound_entry("farfield.gap", p, g, 0.0, 10 * far_field_bound(P, L), Provenance::paper));
                out.push_back(make_bound_entry("farfield.gap_derived", p, g, 0.0, 2 * far_field_leading_remainder(P, L),
                                               Provenance::derived));
            });
        }
        ParamMap p{{"N", str(N)}, {"mu", str(mu)}};
        if (gaps.size() == Ls.size() && Ls.size() >= 2) {
            double slope = std::log(gaps.back() / gaps.front()) / std::log(Ls.back() / Ls.front());
            out.push_back(make_bound_entry("farfield.slope", p, slope, -inf, -(2.0 * N + 2), Provenance::derived));
        }
    }
    return out;
}

inline Entries layer_dichotomy(const Config& cfg) {
    const auto seed = cfg.seed();
    const int draws = cfg.integer("layer_draws");
    const double mu = cfg.mu("layer_mu"), delta = cfg.real("layer_delta"), rho = cfg.real("layer_decay_rho");
    const double min_mode = cfg.real("layer_min_mode");
    const int n_max = cfg.integer("layer_n_max"), L = cfg.integer("layer_L");
    Entries out;
    std::mt19937_64 rng(seed);
    for (int draw = 0; draw < draws; ++draw) {
        auto Phi = random_boundary_data(rng, n_max, rho, L, min_mode);
        const int N = cfg.has("N") ? cfg.integer("N") : 1 + draw % 3;
        ParamMap p{{"draw", str(draw)}, {"N", str(N)}, {"seed", str(seed)}};
        guarded(out, "layer.dichotomy", p, Provenance::paper, [&] {
            auto F = build_layer(Phi, BubbleParams{N, mu, 0.0, 1}, delta, L);
            auto g = grad_h_at_roots(F, N);
            out.push_back(make_bound_entry("layer.dichotomy", p, g.c, 0.05, inf, Provenance::paper));
        });
    }
    // phi0 = ds (2R/3 (y_1/R) - R^2/3 Re (y/R)^2): zero gradient at y = 1, 4/3 ds at y = -1
    const double ds = 1e-3, R = 1 / delta;
    LayerField F;
    F.delta = delta;
    F.delta_star = ds;
    F.phi0.radius = R;
    F.phi0.coefficients = FourierCoefficients(4);
    F.phi0.coefficients.a[1] = ds * 2 * R / 3;
    F.phi0.coefficients.a[2] = -ds * R * R / 3;
    ParamMap p{{"N", "1"}, {"delta_star", str(ds)}};
    guarded(out, "layer.counterexample", p, Provenance::derived, [&] {
        auto g = grad_h_at_roots(F, 1);
        out.push_back(make_entry("layer.counterexample_zero", p, g.ratios[0], 0.0, 1e-12, Provenance::derived));
        out.push_back(make_entry("layer.counterexample", p, g.c, 4.0 / 3 * std::exp(-ds), 1e-9, Provenance::derived));
    });
    return out;
}

// z = (2, 1) and |p_s - p_l| = t eps.
inline double remainder_ratio(int N, double mu, double t) {
    const cplx z(2, 1);
    auto rem = [&](double m) {
        double eps = std::exp(-m / 2);
        return decompose_difference(InteractionParams::make(N, m, m, 0.0, cplx(-eps * t, 0), 1, 1, 1), z).remainder;
    };
    return std::abs(rem(mu + 2 * std::log(2.0)) / rem(mu));
}

inline Entries interaction(const Config& cfg) {
    const auto spec = cfg.quadrature();
    const int N = cfg.has("N") ? cfg.integer("N") : cfg.integer("interaction_N");
    if (N < 1) throw ConfigError("interaction: N must be >= 1");
    const double mu = cfg.mu("interaction_mu"), eps = std::exp(-mu / 2);
    Entries out;
    auto coefficient = [&](const std::string& id, const InteractionParams& P) {
        ParamMap p{{"N", str(N)}, {"mu", str(mu)}, {"eps", str(eps)}, {"h_l", str(P.h_l)}, {"dp", str(P.dp())}};
        guarded(out, id, p, Provenance::derived, [&] {
            try {
                auto r = interaction_coefficient(P, spec);
                out.push_back(make_entry(id, p, r.quadrature, r.closed_form, 0.1, Provenance::derived));
            } catch (const InteractionMismatch& e) {
                out.push_back(make_entry(id, p, e.quadrature, e.closed_form, 0.1, Provenance::derived));
            }
        });
    };
    coefficient("interaction.separation", InteractionParams::make(N, mu, mu, 0.0, cplx(-eps, 0), 1, 1, 1));
    coefficient("interaction.coefficient", InteractionParams::make(N, mu, mu, 0.0, 0.0, 1, 1.01, 1));
    ParamMap pr{{"N", str(N)}, {"mu", str(mu)}, {"t", "0.001"}, {"z", "2+1i"}};
    guarded(out, "interaction.remainder", pr, Provenance::derived, [&] {
        out.push_back(make_bound_entry("interaction.remainder", pr, remainder_ratio(N, mu, 1e-3), 0.0, 0.7,
                                       Provenance::derived));
    });
    ParamMap pk{{"N", str(N)}, {"mu", str(mu)}};
    guarded(out, "interaction.kernel_fit", pk, Provenance::derived, [&] {
        auto k = kernel_coefficients(InteractionParams::make(N, mu, mu, 0.0, cplx(-2 * (N + 1) * eps, 0), 1, 1, 1));
        out.push_back(make_entry("interaction.kernel_fit", pk, k.fit_c1, k.c1, 0.05, Provenance::derived));
    });
    return out;
}

// h0 = exp(ds y_1) built as a layer on B(0, 1/delta).
inline LayerField linear_layer(double ds, double delta) {
    LayerField F;
    F.delta = delta;
    F.delta_star = ds;
    F.phi0.radius = 1 / delta;
    F.phi0.coefficients = FourierCoefficients(4);
    F.phi0.coefficients.a[1] = ds / delta;
    return F;
}

inline Entries pohozaev(const Config& cfg) {
    const auto spec = cfg.quadrature();
    const double mu = cfg.mu("pohozaev_mu");
    const auto radii = cfg.reals("pohozaev_radii");
    const double delta = cfg.real("layer_delta");
    Entries out;
    for (int N : cfg.n_values("pohozaev_N_values")) {
        if (N < 0) throw ConfigError("pohozaev: N must be >= 0");
        const BubbleParams P{N, mu, 0.0, 1};
        for (cplx xi : {cplx(1, 0), cplx(0, 1)})
            for (double r : radii) {
                ParamMap p{{"N", str(N)}, {"mu", str(mu)}, {"xi", str(xi)}, {"radius", str(r)}};
                guarded(out, "pohozaev.residual", p, Provenance::derived, [&] {
                    const cplx Q = bubble_maximum(P, 0);
                    auto rep = pohozaev_check(bubble_field(P), constant_field(P.h), N, Q, r, xi, spec, Q);
                    out.push_back(make_bound_entry("pohozaev.residual", p, std::abs(rep.residual) / rep.scale(), 0.0,
                                                   1e-6, Provenance::derived));
                });
            }
        const double ds = 1e-3;
        ParamMap p{{"N", str(N)}, {"mu", str(mu)}, {"delta_star", str(ds)}};
        guarded(out, "pohozaev.contrast", p, Provenance::derived, [&] {
            auto c = coefficient_contrast(P, linear_layer(ds, delta), 0, 1.0, radii.front(), spec);
            out.push_back(make_bound_entry("pohozaev.contrast", p, c.value / (8 * pi * ds), 0.9, 1.1,
                                           Provenance::derived));
        });
    }
    return out;
}

inline Entries branch(const Config& cfg) {
    const auto bvals = cfg.reals("branch_b_values");
    const int mesh = cfg.integer("eigen_mesh");
    Entries out;
    for (int N : cfg.n_values("branch_N_values")) {
        if (N < 0) throw ConfigError("branch: N must be >= 0");
        const double lam_star = 2.0 * (N + 1) * (N + 1);
        ParamMap p{{"N", str(N)}};
        guarded(out, "branch.fold", p, Provenance::derived, [&] {
            auto rep = trace_branch(N, bvals, false);
            out.push_back(make_entry("branch.fold", p, rep.fold_lambda, lam_star, 1e-4, Provenance::derived));
            for (const auto& pt : rep.points) {
                ParamMap q{{"N", str(N)}, {"b", str(pt.profile.b)}};
                out.push_back(
                    make_entry("branch.harnack", q, pt.harnack_sup, std::log(lam_star), 1e-6, Provenance::derived));
            }
        });
        // lambda(1/2) = lambda(2): both roots from low and high center guesses
        const double lam = branch_lambda(N, 0.5);
        for (auto [name, b, guess] : {std::tuple{"lower", 0.5, 0.0}, std::tuple{"upper", 2.0, 2 * std::log1p(2.0) + 0.1}}) {
            ParamMap q{{"N", str(N)}, {"branch", name}, {"b", str(b)}};
            guarded(out, "branch.shooting", q, Provenance::derived, [&] {
                auto S = shoot_radial(N, lam, guess);
                auto C = closed_form_profile(N, b);
                double sup = 0;
                for (size_t i = 0; i < S.u.size(); ++i) sup = std::max(sup, std::abs(S.u[i] - C.u[i]));
                out.push_back(make_bound_entry("branch.shooting", q, sup, 0.0, 1e-8, Provenance::derived));
            });
        }
        guarded(out, "branch.mode0", p, Provenance::derived, [&] {
            auto e = principal_eigenvalue(closed_form_profile(N, 1.0), 0, mesh);
            out.push_back(make_entry("branch.mode0", p, e.value, 0.0, 1e-3, Provenance::derived));
        });
    }
    return out;
}

inline Entries conjecture_disk(const Config& cfg) {
    const auto spec = cfg.quadrature();
    const int N = cfg.has("N") ? cfg.integer("N") : cfg.integer("conjecture_N");
    if (N < 1) throw ConfigError("conjecture-disk: N must be >= 1");
    const double mu = cfg.mu("conjecture_mu"), rho = cfg.real("conjecture_rho"), th0 = cfg.real("conjecture_theta0");
    const double radius = cfg.real("conjecture_radius");
    const auto deltas = cfg.reals("conjecture_deltas");
    const BubbleParams P{N, mu, 0.0, 1};
    Entries out;
    std::vector<double> ds, st;
    for (double delta : deltas) {
        ParamMap p{{"N", str(N)}, {"mu", str(mu)}, {"delta", str(delta)}};
        guarded(out, "conjecture.dichotomy", p, Provenance::paper, [&] {
            auto L = offset_disk_layer(P, delta, rho, th0);
            ds.push_back(delta);
            st.push_back(L.field.delta_star);
            auto g = grad_h_at_roots(L.field, N);
            out.push_back(make_bound_entry("conjecture.dichotomy", p, g.c, 0.05, inf, Provenance::paper));
            const cplx xi = g.gradients[g.s] / std::abs(g.gradients[g.s]);
            ParamMap q = p;
            q["root"] = str(g.s);
            guarded(out, "conjecture.contrast", q, Provenance::derived, [&] {
                auto c = coefficient_contrast(P, L.field, g.s, xi, radius, spec);
                out.push_back(make_entry("conjecture.contrast", q, c.value, c.expected, 0.1, Provenance::derived));
            });
        });
    }
    if (st.size() >= 2 && st.size() == deltas.size()) {
        ParamMap p{{"N", str(N)}, {"mu", str(mu)}};
        double slope = std::log(st.back() / st.front()) / std::log(ds.back() / ds.front());
        out.push_back(make_bound_entry("conjecture.delta_star_slope", p, slope, N + 2.0, 2.0 * N + 2, Provenance::paper));
    }
    return out;
}

inline Entries run_one(const std::string& name, const Config& cfg) {
    if (name == "identities") return identities(cfg);
    if (name == "moments") return moments(cfg);
    if (name == "bubble") return bubble(cfg);
    if (name == "farfield") return farfield(cfg);
    if (name == "layer-dichotomy") return layer_dichotomy(cfg);
    if (name == "interaction") return interaction(cfg);
    if (name == "pohozaev") return pohozaev(cfg);
    if (name == "branch") return branch(cfg);
    if (name == "conjecture-disk") return conjecture_disk(cfg);
    throw UnknownScenario(name);
}

}  // namespace detail

// LIOUVILLE_LAB_THREADS, else the hardware concurrency.
inline unsigned thread_cap() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* s = std::getenv("LIOUVILLE_LAB_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(s, &end, 10);
        if (end != s && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
    }
    return hw;
}

// Scenarios in "all" run concurrently up to thread_cap(); the result is sorted.
inline Entries run_scenario(const std::string& name, const Config& base, const ParamMap& overrides = {}) {
    Config cfg = base;
    for (const auto& [k, v] : overrides) cfg.set(k, v);
    Entries out;
    if (name != "all") {
        out = detail::run_one(name, cfg);
    } else {
        const auto& names = scenario_names();
        std::vector<Entries> parts(names.size());
        std::vector<std::exception_ptr> errors(names.size());
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (size_t i; (i = next++) < names.size();) {
                try {
                    parts[i] = detail::run_one(names[i], cfg);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        const unsigned n = std::min<unsigned>(thread_cap(), static_cast<unsigned>(names.size()));
        std::vector<std::thread> pool;
        for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
        for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    }
    sort_entries(out);
    return out;
}

}  // namespace liouville_lab
