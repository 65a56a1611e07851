#include "mirror_margin/margin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mirror_margin/errors.hpp"
#include "mirror_margin/simplex.hpp"

namespace mirror_margin {

namespace {

Vec min_margins(const Matrix& Z, const Vec& beta) { return matvec(Z, beta); }

double min_of(const Vec& v) { return *std::min_element(v.begin(), v.end()); }

void require_feasible(const Matrix& Z) {
    // Feasibility of Z beta >= 1 is exactly strict separability.
    Vec c(2 * Z.cols, 0.0);
    std::vector<LpRow> rows;
    for (std::size_t i = 0; i < Z.rows; ++i) {
        Vec a(2 * Z.cols, 0.0);
        for (std::size_t j = 0; j < Z.cols; ++j) {
            a[j] = Z(i, j);
            a[Z.cols + j] = -Z(i, j);
        }
        rows.push_back({std::move(a), RowType::Ge, 1.0});
    }
    if (solve_lp(c, rows).status != LpStatus::Optimal)
        throw ContractViolation("max-margin problem is infeasible: dataset is not separable");
}

struct LpMarginOutcome {
    Vec beta;
    Vec dual;
    double objective;
};

// min |beta|_1 s.t. Z beta >= 1, via beta = a - b with a, b >= 0.
LpMarginOutcome solve_l1(const Matrix& Z, const std::vector<std::size_t>& row_order) {
    const std::size_t d = Z.cols, n = Z.rows;
    Vec c(2 * d, 1.0);
    std::vector<LpRow> rows;
    for (std::size_t i : row_order) {
        Vec a(2 * d, 0.0);
        for (std::size_t j = 0; j < d; ++j) {
            a[j] = Z(i, j);
            a[d + j] = -Z(i, j);
        }
        rows.push_back({std::move(a), RowType::Ge, 1.0});
    }
    auto lp = solve_lp(c, rows);
    if (lp.status != LpStatus::Optimal) throw NumericError("l1 margin LP failed");
    LpMarginOutcome out;
    out.beta.resize(d);
    for (std::size_t j = 0; j < d; ++j) out.beta[j] = lp.x[j] - lp.x[d + j];
    out.dual.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) out.dual[row_order[k]] = std::max(0.0, lp.dual[k]);
    out.objective = lp.objective;
    return out;
}

// min t s.t. Z beta >= 1, |beta_j| <= t, via beta = a - b and a_j + b_j <= t.
LpMarginOutcome solve_linf(const Matrix& Z, const std::vector<std::size_t>& row_order) {
    const std::size_t d = Z.cols, n = Z.rows;
    const std::size_t nv = 2 * d + 1;
    Vec c(nv, 0.0);
    c[2 * d] = 1.0;
    std::vector<LpRow> rows;
    for (std::size_t i : row_order) {
        Vec a(nv, 0.0);
        for (std::size_t j = 0; j < d; ++j) {
            a[j] = Z(i, j);
            a[d + j] = -Z(i, j);
        }
        rows.push_back({std::move(a), RowType::Ge, 1.0});
    }
    for (std::size_t j = 0; j < d; ++j) {
        Vec a(nv, 0.0);
        a[j] = 1.0;
        a[d + j] = 1.0;
        a[2 * d] = -1.0;
        rows.push_back({std::move(a), RowType::Le, 0.0});
    }
    auto lp = solve_lp(c, rows);
    if (lp.status != LpStatus::Optimal) throw NumericError("linf margin LP failed");
    LpMarginOutcome out;
    out.beta.resize(d);
    for (std::size_t j = 0; j < d; ++j) out.beta[j] = lp.x[j] - lp.x[d + j];
    out.dual.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) out.dual[row_order[k]] = std::max(0.0, lp.dual[k]);
    out.objective = lp.objective;
    return out;
}

// Hard-margin dual  min_{alpha >= 0} 1/2 |Z^T alpha|^2 - sum alpha  by
// projected coordinate ascent; primal beta = Z^T alpha.
LpMarginOutcome solve_l2(const Matrix& Z) {
    const std::size_t n = Z.rows, d = Z.cols;
    Vec alpha(n, 0.0), w(d, 0.0);
    Vec row_sq(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) row_sq[i] += Z(i, j) * Z(i, j);

    double gap = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < 200000 && gap > 1e-10; ++sweep) {
        for (std::size_t i = 0; i < n; ++i) {
            if (row_sq[i] == 0.0) continue;
            double zi_w = 0.0;
            for (std::size_t j = 0; j < d; ++j) zi_w += Z(i, j) * w[j];
            double delta = std::max(-alpha[i], (1.0 - zi_w) / row_sq[i]);
            if (delta == 0.0) continue;
            alpha[i] += delta;
            for (std::size_t j = 0; j < d; ++j) w[j] += delta * Z(i, j);
        }
        double m = min_of(min_margins(Z, w));
        if (m > 0.0) {
            double primal = 0.5 * dot(w, w) / (m * m);
            double dual_obj = std::accumulate(alpha.begin(), alpha.end(), 0.0) - 0.5 * dot(w, w);
            gap = primal - dual_obj;
        }
    }

    double m = min_of(min_margins(Z, w));
    if (!(m > 0.0)) throw NumericError("l2 margin ascent produced no positive margin");
    LpMarginOutcome out;
    out.beta = (1.0 / m) * w;
    out.dual = (1.0 / m) * alpha;
    out.objective = norm2(out.beta);
    return out;
}

// Kelley cutting planes on the gauge: min t s.t. <v_k, beta> <= t over
// accumulated subgradient cuts, Z beta >= 1.
LpMarginOutcome solve_cutting_plane(const Gauge& gauge, const Matrix& Z,
                                    const std::vector<std::size_t>& row_order, bool& stalled) {
    const std::size_t d = Z.cols, n = Z.rows;
    const std::size_t nv = 2 * d + 1;  // a, b, t

    std::vector<Vec> cuts;
    auto add_cut_at = [&](const Vec& x) {
        auto verts = gauge.subdifferential_vertices(x);
        if (verts.empty()) {
            // d >= 3 sampled gauges expose no vertex structure; use a central
            // finite-difference gradient rescaled onto the supporting plane.
            const double h = 1e-6 * std::max(1.0, norm2(x));
            Vec v(d, 0.0);
            for (std::size_t j = 0; j < d; ++j) {
                Vec hi = x, lo = x;
                hi[j] += h;
                lo[j] -= h;
                v[j] = (gauge(hi) - gauge(lo)) / (2.0 * h);
            }
            double s = dot(v, x);
            if (s > 0.0) verts.push_back((gauge(x) / s) * v);
        }
        for (auto& v : verts) cuts.push_back(std::move(v));
    };
    // seed with axis directions so the first LP is already bounded-ish
    for (std::size_t j = 0; j < d; ++j) {
        Vec e(d, 0.0);
        e[j] = 1.0;
        add_cut_at(e);
        e[j] = -1.0;
        add_cut_at(e);
    }

    LpMarginOutcome out;
    stalled = true;
    for (int iter = 0; iter < 200; ++iter) {
        Vec c(nv, 0.0);
        c[2 * d] = 1.0;
        std::vector<LpRow> rows;
        for (std::size_t i : row_order) {
            Vec a(nv, 0.0);
            for (std::size_t j = 0; j < d; ++j) {
                a[j] = Z(i, j);
                a[d + j] = -Z(i, j);
            }
            rows.push_back({std::move(a), RowType::Ge, 1.0});
        }
        for (const auto& v : cuts) {
            Vec a(nv, 0.0);
            for (std::size_t j = 0; j < d; ++j) {
                a[j] = v[j];
                a[d + j] = -v[j];
            }
            a[2 * d] = -1.0;
            rows.push_back({std::move(a), RowType::Le, 0.0});
        }
        auto lp = solve_lp(c, rows);
        if (lp.status != LpStatus::Optimal)
            throw NumericError("cutting-plane margin LP failed at iteration " +
                               std::to_string(iter));
        Vec beta(d);
        for (std::size_t j = 0; j < d; ++j) beta[j] = lp.x[j] - lp.x[d + j];
        double lower = lp.x[2 * d];
        double actual = gauge(beta);

        out.beta = beta;
        out.objective = actual;
        out.dual.assign(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) out.dual[row_order[k]] = std::max(0.0, lp.dual[k]);

        if (actual - lower <= 1e-9 * std::max(1.0, actual)) {
            stalled = false;
            break;
        }
        add_cut_at(beta);
    }
    return out;
}

bool vertices_differ(const Vec& a, const Vec& b) {
    double scale = std::max(1.0, std::max(norm_inf(a), norm_inf(b)));
    return norm_inf(a - b) > 1e-6 * scale;
}

}  // namespace

MarginSolution solve_max_margin(const MarginProblem& prob) {
    const Matrix& Z = prob.Z;
    require_feasible(Z);

    std::vector<std::size_t> fwd(Z.rows), rev(Z.rows);
    std::iota(fwd.begin(), fwd.end(), 0);
    rev = fwd;
    std::reverse(rev.begin(), rev.end());

    MarginSolution sol;
    LpMarginOutcome first, second;
    bool vertex_solver = false;

    switch (prob.gauge.kind()) {
        case GaugeKind::L1:
            first = solve_l1(Z, fwd);
            second = solve_l1(Z, rev);
            vertex_solver = true;
            break;
        case GaugeKind::Linf:
            first = solve_linf(Z, fwd);
            second = solve_linf(Z, rev);
            vertex_solver = true;
            break;
        case GaugeKind::L2:
            first = solve_l2(Z);
            break;
        case GaugeKind::Lp:
        case GaugeKind::Sampled: {
            bool stalled_fwd = false, stalled_rev = false;
            first = solve_cutting_plane(prob.gauge, Z, fwd, stalled_fwd);
            second = solve_cutting_plane(prob.gauge, Z, rev, stalled_rev);
            sol.stalled = stalled_fwd || stalled_rev;
            vertex_solver = true;
            break;
        }
    }

    sol.beta = first.beta;
    sol.dual = first.dual;
    sol.objective = prob.gauge(first.beta);
    if (vertex_solver) {
        if (std::abs(first.objective - second.objective) >
            1e-10 * std::max(1.0, std::abs(first.objective)))
            throw NumericError("margin LP objectives disagree under row permutation",
                               std::abs(first.objective - second.objective));
        if (vertices_differ(first.beta, second.beta)) {
            sol.uniqueness = Uniqueness::PossiblyNonUnique;
            sol.witness_pair = {first.beta, second.beta};
        }
    }
    sol.kkt = kkt_verify(sol.beta, sol.dual, prob.gauge, Z);
    return sol;
}

Vec angular_sweep_oracle(const Gauge& gauge, const Matrix& Z, int resolution) {
    if (Z.cols != 2) throw ContractViolation("angular_sweep_oracle: d = 2 only");
    if (resolution < 8) throw ContractViolation("angular_sweep_oracle: resolution too small");

    auto margin_at = [&](double theta) {
        Vec u = {std::cos(theta), std::sin(theta)};
        return min_of(min_margins(Z, u));
    };
    auto objective_at = [&](double theta) {
        double m = margin_at(theta);
        if (m <= 0.0) return std::numeric_limits<double>::infinity();
        Vec u = {std::cos(theta), std::sin(theta)};
        return gauge(u) / m;
    };

    double best_theta = 0.0, best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < resolution; ++k) {
        double theta = -M_PI + 2.0 * M_PI * k / resolution;
        double f = objective_at(theta);
        if (f < best) {
            best = f;
            best_theta = theta;
        }
    }
    if (!std::isfinite(best))
        throw ContractViolation("angular_sweep_oracle: no angle with positive margin");

    // Golden-section refinement on the bracketing grid interval.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double step = 2.0 * M_PI / resolution;
    double lo = best_theta - step, hi = best_theta + step;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = objective_at(x1), f2 = objective_at(x2);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = objective_at(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = objective_at(x2);
        }
        if (hi - lo < 1e-13) break;
    }
    double theta = 0.5 * (lo + hi);
    if (objective_at(best_theta) < objective_at(theta)) theta = best_theta;
    double m = margin_at(theta);
    return (1.0 / m) * Vec{std::cos(theta), std::sin(theta)};
}

KktReport kkt_verify(const Vec& beta, const Vec& dual, const Gauge& gauge, const Matrix& Z) {
    if (norm2(beta) == 0.0) throw ContractViolation("kkt_verify: beta must be nonzero");
    if (dual.size() != Z.rows) throw ContractViolation("kkt_verify: dual dimension mismatch");

    KktReport rep;
    Vec margins = min_margins(Z, beta);
    rep.feasibility = std::max(0.0, 1.0 - min_of(margins));
    for (std::size_t i = 0; i < dual.size(); ++i)
        rep.slackness = std::max(rep.slackness, dual[i] * std::abs(margins[i] - 1.0));

    // Z^T q = lambda * v with v in d(gauge)(beta): lambda is pinned by
    // <v, beta> = gauge(beta); the residual is how far v leaves the dual ball.
    Vec g = matvec_t(Z, dual);
    double lambda = dot(g, beta) / gauge(beta);
    rep.proportionality = lambda;
    if (lambda <= 0.0) {
        rep.stationarity = std::numeric_limits<double>::infinity();
        return rep;
    }
    rep.stationarity = std::abs(gauge.dual((1.0 / lambda) * g) - 1.0);
    return rep;
}

double directional_gap(const Vec& trajectory_direction, const Vec& solution_beta) {
    return 1.0 - cosine_similarity(trajectory_direction, solution_beta);
}

}  // namespace mirror_margin
