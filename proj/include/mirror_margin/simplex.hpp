#pragma once

#include <vector>

#include "mirror_margin/linalg.hpp"

namespace mirror_margin {

enum class RowType { Eq, Ge, Le };

struct LpRow {
    Vec a;
    RowType type;
    double rhs;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Vec x;             // primal solution over the caller's variables
    double objective = 0.0;
    Vec dual;          // one multiplier per row; >= 0 for Ge rows, <= 0 for Le rows
};

/// Dense two-phase simplex with Bland's anti-cycling rule.
/// Solves  min c'x  s.t. the given rows,  x >= 0.
LpResult solve_lp(const Vec& c, const std::vector<LpRow>& rows);

}  // namespace mirror_margin
