#pragma once

#include <cstddef>
#include <vector>

#include "mirror_margin/data.hpp"
#include "mirror_margin/linalg.hpp"
#include "mirror_margin/losses.hpp"
#include "mirror_margin/potentials.hpp"

namespace mirror_margin {

struct FlowConfig {
    double step_size = 1e-2;
    bool adaptive = false;      // step_size / (1 + |Z^T q|) damping
    std::size_t max_steps = 10000;
    // Integrate the time-changed dynamics d(grad phi) = Z^T q dt. The plain
    // flow slows down exponentially as the loss vanishes, so this is the default.
    bool rescaled = true;
    std::size_t record_every = 10;
    double stop_norm = std::numeric_limits<double>::infinity();  // on |grad phi(beta)|
    Vec beta0;                  // empty = origin
    bool require_separable = true;
};

struct Trajectory {
    Matrix Z;
    Vec times;                        // accumulated rescaled time at record points
    std::vector<Vec> iterates;
    std::vector<Vec> duals;           // grad phi at record points
    std::vector<Vec> directions;      // beta / |beta|_2
    Vec losses;                       // linear domain, may underflow to 0
    Vec log_losses;
    std::vector<Vec> q_history;
    Vec q_running_average;            // Cesaro average over the whole run
    Vec accumulated_weights;          // integral of a_s q_s ds (the dual increment is Z^T this)
    bool halted_nonfinite = false;
    bool hit_stop_norm = false;
};

/// One explicit mirror-descent step.
Vec flow_step(const VectorPotential& potential, const Loss& loss, const Matrix& Z,
              const Vec& beta, const FlowConfig& cfg);

Trajectory run_flow(const VectorPotential& potential, const Loss& loss, const Dataset& ds,
                    const FlowConfig& cfg);

struct LimitDiagnostics {
    Vec direction;
    Vec q_limit;          // tail average of the recorded q history
    Vec dual_direction;   // grad phi normalized to unit norm
    double convergence_residual;  // |dual/t - Z^T qbar| relative
};

LimitDiagnostics limit_diagnostics(const Trajectory& tr);

}  // namespace mirror_margin
