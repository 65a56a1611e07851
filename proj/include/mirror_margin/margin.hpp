#pragma once

#include <optional>
#include <utility>

#include "mirror_margin/gauge.hpp"
#include "mirror_margin/linalg.hpp"

namespace mirror_margin {

struct MarginProblem {
    Gauge gauge;
    Matrix Z;
};

enum class Uniqueness { Unique, PossiblyNonUnique };

struct KktReport {
    double stationarity = 0.0;  // distance of Z^T q / lambda from the subdifferential
    double slackness = 0.0;     // max_i q_i |(Z beta)_i - 1|
    double feasibility = 0.0;   // max(0, 1 - min_i (Z beta)_i)
    double proportionality = 0.0;  // lambda with Z^T q ~ lambda * subgradient

    bool pass(double tol) const {
        return stationarity <= tol && slackness <= tol && feasibility <= tol &&
               proportionality > 0.0;
    }
};

struct MarginSolution {
    Vec beta;
    double objective = 0.0;
    Vec dual;  // q >= 0, one entry per data point
    KktReport kkt;
    Uniqueness uniqueness = Uniqueness::Unique;
    std::optional<std::pair<Vec, Vec>> witness_pair;  // differing vertices, if found
    bool stalled = false;  // generic path hit its iteration cap
};

/// min gauge(beta)  s.t.  (Z beta)_i >= 1 for all i.
/// L1/Linf run through the two-phase simplex, L2 through dual coordinate
/// ascent, Lp/Sampled through cutting planes on the gauge.
MarginSolution solve_max_margin(const MarginProblem& prob);

/// Independent d = 2 verification oracle: dense sweep over angles maximizing
/// margin-per-gauge, refined by golden section around the best angle.
Vec angular_sweep_oracle(const Gauge& gauge, const Matrix& Z, int resolution);

/// Residual report for the optimality conditions; check with KktReport::pass(tol).
KktReport kkt_verify(const Vec& beta, const Vec& dual, const Gauge& gauge, const Matrix& Z);

/// 1 - cosine similarity; scale-free.
double directional_gap(const Vec& trajectory_direction, const Vec& solution_beta);

}  // namespace mirror_margin
