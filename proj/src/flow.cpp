#include "mirror_margin/flow.hpp"

#include <cmath>

#include "mirror_margin/errors.hpp"

namespace mirror_margin {

namespace {

bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

double effective_step(const FlowConfig& cfg, const Vec& zq) {
    if (!cfg.adaptive) return cfg.step_size;
    return cfg.step_size / (1.0 + norm2(zq));
}

}  // namespace

Vec flow_step(const VectorPotential& potential, const Loss& loss, const Matrix& Z,
              const Vec& beta, const FlowConfig& cfg) {
    if (!all_finite(beta)) throw NumericError("flow_step: non-finite iterate");
    Vec g;
    if (cfg.rescaled) {
        g = (-1.0) * matvec_t(Z, loss.q_vector(Z, beta));
    } else {
        g = loss.risk_gradient(Z, beta);
    }
    if (!all_finite(g)) throw NumericError("flow_step: non-finite gradient");
    double gamma = effective_step(cfg, g);
    Vec u = potential.mirror_map(beta) - gamma * g;
    return potential.inverse_mirror_map(u);
}

Trajectory run_flow(const VectorPotential& potential, const Loss& loss, const Dataset& ds,
                    const FlowConfig& cfg) {
    if (cfg.step_size <= 0.0) throw ContractViolation("flow step size must be positive");
    if (cfg.max_steps < 1) throw ContractViolation("flow needs at least one step");
    if (cfg.require_separable && !check_separable(ds).separable)
        throw ContractViolation(
            "dataset is not separable; set require_separable = false to explore anyway");

    const Matrix& Z = ds.Z;
    Vec beta = cfg.beta0.empty() ? Vec(ds.d(), 0.0) : cfg.beta0;
    if (beta.size() != ds.d()) throw ContractViolation("beta0 dimension mismatch");

    Trajectory tr;
    tr.Z = Z;
    tr.accumulated_weights.assign(ds.n(), 0.0);
    double theta = 0.0;  // rescaled time

    auto record = [&](const Vec& b) {
        auto risk = loss.risk(Z, b);
        tr.times.push_back(theta);
        tr.iterates.push_back(b);
        tr.duals.push_back(potential.mirror_map(b));
        tr.directions.push_back(norm2(b) > 0.0 ? normalized(b) : b);
        tr.losses.push_back(risk.value);
        tr.log_losses.push_back(risk.log_value);
        tr.q_history.push_back(loss.q_vector(Z, b));
    };

    record(beta);
    for (std::size_t k = 1; k <= cfg.max_steps; ++k) {
        Vec q = loss.q_vector(Z, beta);
        Vec zq = matvec_t(Z, q);
        double gamma = effective_step(cfg, zq);

        Vec u;
        if (cfg.rescaled) {
            u = potential.mirror_map(beta) + gamma * zq;
        } else {
            u = potential.mirror_map(beta) - gamma * loss.risk_gradient(Z, beta);
        }
        if (!all_finite(u)) {
            tr.halted_nonfinite = true;
            break;
        }
        Vec next = potential.inverse_mirror_map(u);
        if (!all_finite(next)) {
            tr.halted_nonfinite = true;
            break;
        }

        // In rescaled time the dual increment is gamma Z^T q; in plain time it
        // is gamma a Z^T q and the rescaled clock advances by gamma a.
        double a_weight = cfg.rescaled ? 1.0 : loss.a_scalar(Z, beta);
        for (std::size_t i = 0; i < ds.n(); ++i)
            tr.accumulated_weights[i] += gamma * a_weight * q[i];
        theta += gamma * a_weight;
        beta = std::move(next);

        bool last = k == cfg.max_steps;
        bool stop = norm2(potential.mirror_map(beta)) > cfg.stop_norm;
        if (k % cfg.record_every == 0 || last || stop) record(beta);
        if (stop) {
            tr.hit_stop_norm = true;
            break;
        }
    }

    tr.q_running_average = (theta > 0.0 ? 1.0 / theta : 1.0) * tr.accumulated_weights;
    return tr;
}

LimitDiagnostics limit_diagnostics(const Trajectory& tr) {
    if (tr.iterates.size() < 2) throw ContractViolation("limit_diagnostics: trajectory too short");
    const Vec& last = tr.iterates.back();
    double achieved = norm2(last);
    double needed = 10.0 * (norm2(tr.iterates.front()) + 1.0);
    if (achieved < needed)
        throw NumericError("limit_diagnostics: trajectory too short, |beta| = " +
                               std::to_string(achieved) + " < " + std::to_string(needed),
                           achieved);

    LimitDiagnostics diag;
    diag.direction = tr.directions.back();
    diag.dual_direction = normalized(tr.duals.back());

    // Tail average of q over the last quarter of the recorded points.
    std::size_t m = tr.q_history.size();
    std::size_t start = m - std::max<std::size_t>(1, m / 4);
    Vec qbar(tr.q_history.front().size(), 0.0);
    for (std::size_t k = start; k < m; ++k) qbar = qbar + tr.q_history[k];
    diag.q_limit = (1.0 / static_cast<double>(m - start)) * qbar;

    Vec predicted = matvec_t(tr.Z, tr.q_running_average);
    Vec scaled_dual = (1.0 / tr.times.back()) * tr.duals.back();
    diag.convergence_residual = norm2(scaled_dual - predicted) / std::max(1.0, norm2(predicted));
    return diag;
}

}  // namespace mirror_margin
