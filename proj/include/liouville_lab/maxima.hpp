#pragma once

#include "liouville_lab/bubble.hpp"
#include "liouville_lab/numerics.hpp"
#include "liouville_lab/report.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace liouville_lab {

struct GreenValue {
    double G = 0;
    double H = 0;
    cplx grad1_H{0.0, 0.0};
};

// grad_1 H(y, eta), also defined at y = eta.
inline cplx green_regular_gradient(double R, cplx y, cplx eta) {
    const double ae = std::abs(eta);
    if (ae == 0) return 0.0;
    cplx eta_star = R * R * eta / (ae * ae);
    return 1.0 / std::conj(y - eta_star) / (2 * pi);
}

// Dirichlet Green's function of B(0, R):
// G = -(1/2pi) log|y - eta| + H, H = (1/2pi) log(|eta| |y - eta*| / R),
// eta* = R^2 eta / |eta|^2.
inline GreenValue green_disk(double R, cplx y, cplx eta) {
    if (!(R > 0)) throw std::invalid_argument("green_disk: R must be positive");
    if (!(std::abs(y) < R) || !(std::abs(eta) < R)) throw std::domain_error("green_disk: points must lie inside the disk");
    if (y == eta) throw std::domain_error("green_disk: singularity at y = eta");
    GreenValue g;
    const double ae = std::abs(eta);
    // |eta| |y - eta*| = | |eta| y - R^2 eta/|eta| |, which tends to R^2 as eta -> 0
    cplx u = ae == 0 ? cplx(0.0) : ae * y - R * R * eta / ae;
    double mag = ae == 0 ? R * R : std::abs(u);
    g.H = std::log(mag / R) / (2 * pi);
    g.grad1_H = green_regular_gradient(R, y, eta);
    g.G = -std::log(std::abs(y - eta)) / (2 * pi) + g.H;
    return g;
}

struct OscillationGradient {
    std::vector<cplx> gradient;    // direct + leading image term, per m
    std::vector<cplx> direct;
    std::vector<cplx> image_exact;  // full image sum 8 pi grad1_H summed over l
    cplx image_leading{0.0, 0.0};   // -4 R^{-2} sum_l Q_l, shared by every m
};

// Gradient at Q_m of sum_l 8 pi G(., Q_l) without the own singular term:
// -4 sum_{l != m} (Q_m - Q_l)/|Q_m - Q_l|^2 plus the image part, whose
// R^{-2} term is -4 R^{-2} sum_l Q_l.
inline OscillationGradient oscillation_gradient(const MaximaConfiguration& c) {
    c.validate();
    OscillationGradient out;
    const size_t n = c.Q.size();
    for (size_t m = 0; m < n; ++m)
        for (size_t l = 0; l < m; ++l)
            if (std::abs(c.Q[m] - c.Q[l]) < 1e-12) throw std::domain_error("oscillation_gradient: coincident points");
    cplx sumQ = 0.0;
    for (cplx q : c.Q) sumQ += q;
    out.image_leading = std::isfinite(c.R) ? -4.0 * sumQ / (c.R * c.R) : cplx(0.0);
    for (size_t m = 0; m < n; ++m) {
        cplx d = 0.0, img = 0.0;
        for (size_t l = 0; l < n; ++l) {
            if (l != m) d += -4.0 / std::conj(c.Q[m] - c.Q[l]);
            if (std::isfinite(c.R)) img += 8 * pi * green_regular_gradient(c.R, c.Q[m], c.Q[l]);
        }
        out.direct.push_back(d);
        out.image_exact.push_back(img);
        out.gradient.push_back(d + out.image_leading);
    }
    return out;
}

struct InteractionMatrix {
    int N = 1;
    std::vector<double> d;  // d[j-1] = d_j
    double D = 0;
    Eigen::MatrixXd A;

    double dj(int j) const { return d[static_cast<size_t>(j - 1)]; }
};

inline InteractionMatrix interaction_matrix(int N) {
    if (N < 1) throw std::invalid_argument("interaction_matrix: N must be >= 1");
    InteractionMatrix M;
    M.N = N;
    for (int j = 1; j <= N; ++j) {
        // reflect into (0, pi/2] so that d_j = d_{N+1-j} holds bit for bit
        double s = std::sin(std::min(j, N + 1 - j) * pi / (N + 1));
        M.d.push_back(1 / (s * s));
    }
    for (double v : M.d) M.D += v;
    M.A.resize(N, N);
    for (int l = 1; l <= N; ++l)
        for (int j = 1; j <= N; ++j) M.A(l - 1, j - 1) = l == j ? M.D : -M.dj(std::abs(j - l));
    return M;
}

struct MaximaSolve {
    std::vector<cplx> m;  // m_1..m_N
    std::vector<double> margin;
    double sigma_min = 0;
    double cond = 0;
    double residual = 0;     // |A m - rhs| / |rhs|
    double l0_residual = 0;  // row 0 of the full system against -sum rhs
};

inline MaximaSolve solve_maxima_system(int N, const std::vector<cplx>& rhs) {
    if (N < 1 || N > 64) throw std::invalid_argument("solve_maxima_system: need 1 <= N <= 64");
    if (rhs.size() != static_cast<size_t>(N)) throw std::invalid_argument("solve_maxima_system: rhs must have N entries");
    auto M = interaction_matrix(N);
    MaximaSolve out;
    for (int l = 0; l < N; ++l) {
        double off = 0;
        for (int j = 0; j < N; ++j)
            if (j != l) off += std::abs(M.A(l, j));
        out.margin.push_back(M.A(l, l) - off);
    }
    auto sv = svd_diagnostics(M.A);
    out.sigma_min = sv.sigma_min;
    out.cond = sv.cond;
    Eigen::VectorXcd b(N);
    for (int l = 0; l < N; ++l) b(l) = rhs[l];
    Eigen::MatrixXcd Ac = M.A.cast<cplx>();
    Eigen::VectorXcd x = Ac.partialPivLu().solve(b);
    double bn = b.norm();
    out.residual = bn == 0 ? (Ac * x - b).norm() : (Ac * x - b).norm() / bn;
    cplx row0 = 0.0, sum_rhs = 0.0;
    for (int j = 1; j <= N; ++j) {
        out.m.push_back(x(j - 1));
        row0 += -M.dj(j) * x(j - 1);
        sum_rhs += rhs[j - 1];
    }
    out.l0_residual = std::abs(row0 + sum_rhs);
    return out;
}

inline void write_matrix_csv(std::ostream& os, const InteractionMatrix& M) {
    os << "row,col,value\n";
    for (int l = 0; l < M.N; ++l)
        for (int j = 0; j < M.N; ++j) os << l + 1 << ',' << j + 1 << ',' << fmt17(M.A(l, j)) << '\n';
}

inline double trig_identity_residual(double theta) {
    cplx e = std::polar(1.0, theta);
    cplx lhs = e / ((1.0 - e) * (1.0 - e));
    double s = std::sin(theta / 2);
    double rhs = -1 / (4 * s * s);
    return std::abs(lhs - rhs) / std::abs(rhs);
}

// max over l of |N - 2 sum_{j != l} e^{i b_l}/(e^{i b_l} - e^{i b_j})|.
inline double root_sum_residual(int N) {
    double worst = 0;
    for (int l = 0; l <= N; ++l) {
        cplx el = std::polar(1.0, 2 * pi * l / (N + 1)), s = 0.0;
        for (int j = 0; j <= N; ++j)
            if (j != l) s += el / (el - std::polar(1.0, 2 * pi * j / (N + 1)));
        worst = std::max(worst, std::abs(static_cast<double>(N) - 2.0 * s));
    }
    return worst;
}

// max over l of |sum_{j != l} d_{|j-l| mod (N+1)} - D|.
inline double row_sum_spread(const InteractionMatrix& M) {
    double worst = 0;
    const int n1 = M.N + 1;
    for (int l = 0; l < n1; ++l) {
        double s = 0;
        for (int j = 0; j < n1; ++j)
            if (j != l) s += M.dj(std::abs(j - l));
        worst = std::max(worst, std::abs(s - M.D));
    }
    return worst;
}

inline std::vector<ReportEntry> verify_identities(int N_max, int theta_points = 720) {
    if (N_max < 1 || N_max > 256) throw std::invalid_argument("verify_identities: need 1 <= N_max <= 256");
    std::vector<ReportEntry> out;
    double trig = 0;
    for (int k = 1; k < theta_points; ++k) trig = std::max(trig, trig_identity_residual(2 * pi * k / theta_points));
    out.push_back(make_entry("identities.trig", {{"theta_points", std::to_string(theta_points)}}, trig, 0.0, 1e-12,
                             Provenance::paper));
    for (int N = 1; N <= N_max; ++N) {
        ParamMap p{{"N", std::to_string(N)}};
        auto M = interaction_matrix(N);
        double n2 = static_cast<double>(N) * N;
        out.push_back(make_entry("identities.d_sum", p, M.D, (n2 + 2 * N) / 3, 1e-9 * n2, Provenance::paper));
        out.push_back(make_entry("identities.root_sum", p, root_sum_residual(N), 0.0, 1e-10 * N, Provenance::paper));
        out.push_back(make_entry("identities.row_sum", p, row_sum_spread(M), 0.0, 1e-12 * M.D, Provenance::paper));
    }
    return out;
}

}  // namespace liouville_lab
