#include "mirror_margin/simplex.hpp"

#include <cmath>
#include <cstddef>

#include "mirror_margin/errors.hpp"

namespace mirror_margin {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;

struct Tableau {
    std::size_t m, n_total;
    std::vector<Vec> rows;   // m x n_total, equals B^-1 A
    Vec rhs;                 // B^-1 b
    Vec reduced;             // reduced cost per column
    double obj = 0.0;
    std::vector<std::size_t> basis;

    void pivot(std::size_t r, std::size_t c) {
        double piv = rows[r][c];
        for (double& v : rows[r]) v /= piv;
        rhs[r] /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || rows[i][c] == 0.0) continue;
            double f = rows[i][c];
            for (std::size_t j = 0; j < n_total; ++j) rows[i][j] -= f * rows[r][j];
            rhs[i] -= f * rhs[r];
        }
        double f = reduced[c];
        if (f != 0.0) {
            for (std::size_t j = 0; j < n_total; ++j) reduced[j] -= f * rows[r][j];
            obj += f * rhs[r];
        }
        basis[r] = c;
    }

    void set_costs(const Vec& cost) {
        reduced = cost;
        obj = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double cb = cost[basis[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j < n_total; ++j) reduced[j] -= cb * rows[i][j];
            obj += cb * rhs[i];
        }
    }

    // Bland's rule: smallest eligible entering index, smallest basis index on ratio ties.
    // Returns false when optimal, throws on unboundedness.
    bool bland_step(const std::vector<bool>& blocked) {
        std::size_t enter = n_total;
        for (std::size_t j = 0; j < n_total; ++j) {
            if (blocked[j]) continue;
            if (reduced[j] < -kPivotTol) {
                enter = j;
                break;
            }
        }
        if (enter == n_total) return false;

        std::size_t leave = m;
        double best_ratio = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (rows[i][enter] <= kPivotTol) continue;
            double ratio = rhs[i] / rows[i][enter];
            if (leave == m || ratio < best_ratio - 1e-12 ||
                (std::abs(ratio - best_ratio) <= 1e-12 && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == m) throw NumericError("simplex: unbounded problem");
        pivot(leave, enter);
        return true;
    }
};

}  // namespace

LpResult solve_lp(const Vec& c, const std::vector<LpRow>& rows_in) {
    const std::size_t m = rows_in.size();
    const std::size_t n = c.size();

    std::size_t n_slack = 0;
    for (const auto& r : rows_in) {
        if (r.a.size() != n) throw ContractViolation("solve_lp: row dimension mismatch");
        if (r.type != RowType::Eq) ++n_slack;
    }
    const std::size_t n_total = n + n_slack + m;
    const std::size_t art0 = n + n_slack;

    Tableau t;
    t.m = m;
    t.n_total = n_total;
    t.rows.assign(m, Vec(n_total, 0.0));
    t.rhs.assign(m, 0.0);
    t.basis.assign(m, 0);

    std::vector<double> row_sign(m, 1.0);
    std::size_t slack_idx = n;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& r = rows_in[i];
        for (std::size_t j = 0; j < n; ++j) t.rows[i][j] = r.a[j];
        double b = r.rhs;
        if (r.type == RowType::Ge) t.rows[i][slack_idx++] = -1.0;
        else if (r.type == RowType::Le) t.rows[i][slack_idx++] = 1.0;
        if (b < 0.0) {
            row_sign[i] = -1.0;
            for (std::size_t j = 0; j < n_total; ++j) t.rows[i][j] = -t.rows[i][j];
            b = -b;
        }
        t.rows[i][art0 + i] = 1.0;
        t.rhs[i] = b;
        t.basis[i] = art0 + i;
    }

    // Phase 1: minimize the artificial sum.
    Vec phase1_cost(n_total, 0.0);
    for (std::size_t i = 0; i < m; ++i) phase1_cost[art0 + i] = 1.0;
    t.set_costs(phase1_cost);
    std::vector<bool> blocked(n_total, false);
    std::size_t iters = 0;
    while (t.bland_step(blocked)) {
        if (++iters > 100000) throw NumericError("simplex: iteration limit in phase 1");
    }
    if (t.obj > kFeasTol) {
        LpResult res;
        res.status = LpStatus::Infeasible;
        return res;
    }

    // Drive leftover basic artificials out where the row has structural support.
    for (std::size_t i = 0; i < m; ++i) {
        if (t.basis[i] < art0) continue;
        for (std::size_t j = 0; j < art0; ++j) {
            if (std::abs(t.rows[i][j]) > kPivotTol) {
                t.pivot(i, j);
                break;
            }
        }
    }

    // Phase 2: artificials may not re-enter.
    Vec phase2_cost(n_total, 0.0);
    for (std::size_t j = 0; j < n; ++j) phase2_cost[j] = c[j];
    t.set_costs(phase2_cost);
    for (std::size_t i = 0; i < m; ++i) blocked[art0 + i] = true;
    iters = 0;
    while (t.bland_step(blocked)) {
        if (++iters > 100000) throw NumericError("simplex: iteration limit in phase 2");
    }

    LpResult res;
    res.status = LpStatus::Optimal;
    res.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (t.basis[i] < n) res.x[t.basis[i]] = t.rhs[i];
    res.objective = dot(c, res.x);

    // y_i = -reduced cost of the i-th artificial column (its cost is zero in
    // phase 2), mapped back through any row sign flip.
    res.dual.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) res.dual[i] = -t.reduced[art0 + i] * row_sign[i];
    return res;
}

}  // namespace mirror_margin
