#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "mirror_margin/data.hpp"
#include "mirror_margin/flow.hpp"
#include "mirror_margin/gauge.hpp"
#include "mirror_margin/potentials.hpp"

namespace mirror_margin {

/// One JSON file per experiment. Every default is materialized back out into
/// effective_config.json so a run is self-describing.
struct ExperimentConfig {
    // dataset: either a CSV path or generator parameters with a mandatory seed
    std::optional<std::string> dataset_file;
    int n_pos = 40;
    int n_neg = 40;
    Vec center_pos, center_neg;
    double spread = 0.7;
    std::uint64_t seed = 0;
    bool has_generator = false;

    nlohmann::json potential_spec;  // {"kind": "quadratic"} etc.
    std::string loss_name = "exponential";
    FlowConfig flow;

    nlohmann::json gauge_spec;  // "auto", a name, or {"kind": "lp", "p": ...}

    Vec horizon_levels = {1e2, 1e4, 1e6, 1e8};
    std::size_t horizon_grid = 360;
    double horizon_gap_tol = 1e-3;
    double eps_degenerate = 0.05;
    double horizon_tol = 1e-6;

    std::string out_dir = "out";
    bool plots = true;

    static ExperimentConfig load(const std::string& path);
    nlohmann::json effective() const;
};

VectorPotential make_potential(const nlohmann::json& spec, std::size_t dim);

/// Resolve the gauge spec: named kinds directly, "auto" through the numeric
/// horizon probe of the potential.
Gauge resolve_gauge(const ExperimentConfig& cfg, const VectorPotential& potential);

Dataset load_or_generate(const ExperimentConfig& cfg);

// Each returns a process exit code: 0 success, 2 validation failure,
// 3 numeric failure, 4 I/O failure.
int cmd_run(const ExperimentConfig& cfg);
int cmd_horizon(const ExperimentConfig& cfg);
int cmd_check(const ExperimentConfig& cfg);

int exit_code_for(const std::exception& e);

}  // namespace mirror_margin
