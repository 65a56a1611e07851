#pragma once

#include <cstddef>
#include <vector>

#include "mirror_margin/gauge.hpp"
#include "mirror_margin/linalg.hpp"
#include "mirror_margin/potentials.hpp"

namespace mirror_margin {

/// Scale-free limit  lim_{eta -> 0} eta * phi^{-1}(phi(beta / eta))  for a
/// separable even potential. The free proportionality constant is left to
/// gauge canonicalization.
/// Evaluated on the geometric schedule eta = 2^-k with acceptance when two
/// successive values agree to tol; potentials with logarithmic convergence
/// (hyperbolic entropy) fall back to a 1/log(1/eta) extrapolation fit.
double horizon_separable(const VectorPotential& p, const Vec& beta, double tol = 1e-6);

/// Direction grid: uniform angles for d = 2, deterministic low-discrepancy
/// points on the sphere for d >= 3.
std::vector<Vec> direction_grid(std::size_t d, std::size_t count);

struct HorizonShapeProbe {
    Vec levels;
    std::vector<Vec> directions;    // unit grid, shared by all levels
    std::vector<Vec> radial;        // per level: rho_c / R_c on the grid, values in (0, 1]
    Vec radii;                      // R_c per level
    Vec hausdorff_gaps;             // sup-difference between successive normalized sets
    double min_final_radial = 1.0;
    bool degenerate = false;        // min_final_radial below the degeneracy threshold
};

HorizonShapeProbe horizon_shape_numeric(const VectorPotential& p, const Vec& levels,
                                        const std::vector<Vec>& grid,
                                        double eps_degenerate = 0.05);

/// Minkowski gauge of the final normalized level set, canonicalized so the
/// maximum over the l2 unit sphere equals 1. Refuses degenerate shapes.
Gauge gauge_from_probe(const HorizonShapeProbe& probe, double gap_tol = 1e-3);

}  // namespace mirror_margin
