#include "mirror_margin/horizon.hpp"

#include <algorithm>
#include <cmath>

#include "mirror_margin/errors.hpp"

namespace mirror_margin {

namespace {

// h_eta in the linear domain when it fits, log domain otherwise.
// Returns NaN when the evaluation cannot be represented (custom potentials
// past the overflow range).
double h_eta(const ScalarPotential& s, const Vec& beta, double eta) {
    double sum = 0.0;
    bool overflow = false;
    for (double b : beta) {
        double v = s.value(b / eta);
        if (!std::isfinite(v) || v > 1e300) {
            overflow = true;
            break;
        }
        sum += v;
    }
    if (!overflow && sum <= 1e300) return eta * s.value_inverse(sum);

    if (!s.has_log_value()) return std::numeric_limits<double>::quiet_NaN();
    Vec logs;
    for (double b : beta)
        if (b != 0.0) logs.push_back(s.log_value(b / eta));
    double log_sum = log_sum_exp(logs);
    return std::exp(std::log(eta) + s.log_value_inverse_from_log(log_sum));
}

}  // namespace

double horizon_separable(const VectorPotential& p, const Vec& beta, double tol) {
    if (!p.is_separable())
        throw ContractViolation("horizon_separable: potential must be separable with one scalar");
    if (beta.size() != p.dim()) throw ContractViolation("horizon_separable: dimension mismatch");
    if (norm2(beta) == 0.0) throw ContractViolation("horizon_separable: beta must be nonzero");
    const ScalarPotential& s = p.scalar();

    constexpr int kMaxHalvings = 500;
    Vec samples;      // h values along the schedule
    Vec log_inv_eta;  // ln(1/eta) alongside

    // Least-squares intercept of h = a + b / ln(1/eta) over the last 5 samples.
    auto fit_intercept = [&]() {
        std::size_t m = samples.size();
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t i = m - 5; i < m; ++i) {
            double x = 1.0 / log_inv_eta[i];
            sx += x;
            sy += samples[i];
            sxx += x * x;
            sxy += x * samples[i];
        }
        double denom = 5.0 * sxx - sx * sx;
        if (std::abs(denom) < 1e-300) return samples.back();
        return (sy * sxx - sx * sxy) / denom;
    };

    double prev = std::numeric_limits<double>::quiet_NaN();
    double eta = 1.0;
    for (int k = 0; k <= kMaxHalvings; ++k, eta *= 0.5) {
        if (eta == 0.0) break;
        double h = h_eta(s, beta, eta);
        if (!std::isfinite(h)) break;  // custom potential ran out of range
        samples.push_back(h);
        log_inv_eta.push_back(static_cast<double>(k) * std::log(2.0));
        if (std::isfinite(prev)) {
            double diff = std::abs(h - prev);
            // Exact homogeneous case: h is constant along the schedule.
            if (diff <= 1e-12 * std::abs(h)) return h;
            // Step agreement alone is misleading for logarithmic convergence;
            // require consistency with the extrapolated limit as well.
            if (diff < tol * std::abs(h) && samples.size() >= 5 &&
                std::abs(h - fit_intercept()) <= tol * std::abs(h))
                return h;
        }
        prev = h;
    }

    // Logarithmically convergent case (hyperbolic entropy): return the
    // extrapolated intercept.
    if (samples.size() >= 6) return fit_intercept();

    double last = samples.empty() ? std::numeric_limits<double>::quiet_NaN() : samples.back();
    throw NumericError("horizon_separable: no convergence before eta underflow; last h = " +
                           std::to_string(last) + ", previous = " + std::to_string(prev),
                       std::abs(last - prev));
}

std::vector<Vec> direction_grid(std::size_t d, std::size_t count) {
    if (d < 2 || count < 4) throw ContractViolation("direction_grid: need d >= 2 and count >= 4");
    std::vector<Vec> grid;
    grid.reserve(count);
    if (d == 2) {
        for (std::size_t k = 0; k < count; ++k) {
            double theta = -M_PI + 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(count);
            grid.push_back({std::cos(theta), std::sin(theta)});
        }
        return grid;
    }
    // Additive-recurrence low-discrepancy sequence mapped through inverse
    // normal CDF approximation is overkill here; a golden-angle spiral covers
    // d = 3, and higher dimensions use a deterministic Weyl sequence.
    if (d == 3) {
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (std::size_t k = 0; k < count; ++k) {
            double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(count);
            double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            double phi = golden * static_cast<double>(k);
            grid.push_back({r * std::cos(phi), r * std::sin(phi), z});
        }
        return grid;
    }
    // Weyl sequence on [0,1)^d mapped through a rough inverse-Gaussian; only
    // uniformity of directions matters, not the exact density.
    std::vector<double> alpha(d);
    for (std::size_t j = 0; j < d; ++j) alpha[j] = std::sqrt(static_cast<double>(j + 2));
    for (std::size_t k = 0; k < count; ++k) {
        Vec v(d);
        for (std::size_t j = 0; j < d; ++j) {
            double u = std::fmod(alpha[j] * static_cast<double>(k + 1), 1.0);
            // crude probit: symmetric, monotone, adequate for direction spread
            v[j] = std::tan(M_PI * (u - 0.5)) / 2.0;
        }
        grid.push_back(normalized(v));
    }
    return grid;
}

HorizonShapeProbe horizon_shape_numeric(const VectorPotential& p, const Vec& levels,
                                        const std::vector<Vec>& grid, double eps_degenerate) {
    if (levels.empty()) throw ContractViolation("horizon_shape_numeric: need at least one level");
    if (!std::is_sorted(levels.begin(), levels.end()))
        throw ContractViolation("horizon_shape_numeric: levels must be increasing");
    for (const auto& dir : grid)
        if (dir.size() != p.dim()) throw ContractViolation("horizon_shape_numeric: grid dimension");

    HorizonShapeProbe probe;
    probe.levels = levels;
    probe.directions = grid;

    for (double c : levels) {
        Vec rho(grid.size());
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const Vec& dir = grid[g];
            // phi(t dir) is strictly increasing from 0; bracket then bisect.
            double hi = 1.0;
            int grow = 0;
            while (grow < 4000) {
                double v = p.value(hi * dir);
                if (std::isnan(v))
                    throw GeometryError("level-set probe produced NaN along a direction");
                if (v >= c) break;
                hi *= 2.0;
                ++grow;
            }
            if (grow == 4000)
                throw GeometryError("potential is not coercive along grid direction " +
                                    std::to_string(g));
            double lo = hi * 0.5;
            if (hi == 1.0) lo = 0.0;
            for (int it = 0; it < 100; ++it) {
                double mid = 0.5 * (lo + hi);
                if (p.value(mid * dir) < c) lo = mid;
                else hi = mid;
            }
            rho[g] = 0.5 * (lo + hi);
        }
        double R = *std::max_element(rho.begin(), rho.end());
        probe.radii.push_back(R);
        for (double& r : rho) r /= R;
        probe.radial.push_back(std::move(rho));
    }

    for (std::size_t l = 0; l + 1 < probe.radial.size(); ++l) {
        double gap = 0.0;
        for (std::size_t g = 0; g < grid.size(); ++g)
            gap = std::max(gap, std::abs(probe.radial[l][g] - probe.radial[l + 1][g]));
        probe.hausdorff_gaps.push_back(gap);
    }

    probe.min_final_radial =
        *std::min_element(probe.radial.back().begin(), probe.radial.back().end());
    probe.degenerate = probe.min_final_radial < eps_degenerate;
    return probe;
}

Gauge gauge_from_probe(const HorizonShapeProbe& probe, double gap_tol) {
    if (probe.degenerate)
        throw GeometryError("degenerate horizon shape (min radial " +
                            std::to_string(probe.min_final_radial) +
                            "); the flat-shape regime is unsupported");
    if (!probe.hausdorff_gaps.empty() && probe.hausdorff_gaps.back() > gap_tol)
        throw NumericError("horizon probe has not converged: last Hausdorff gap " +
                               std::to_string(probe.hausdorff_gaps.back()),
                           probe.hausdorff_gaps.back());

    const auto& dirs = probe.directions;
    const std::size_t d = dirs.front().size();
    if (d == 2) {
        std::vector<double> angles(dirs.size());
        for (std::size_t k = 0; k < dirs.size(); ++k) angles[k] = std::atan2(dirs[k][1], dirs[k][0]);
        // direction_grid emits sorted angles; re-sort defensively for custom grids
        std::vector<std::size_t> order(dirs.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return angles[a] < angles[b]; });
        std::vector<double> sorted_angles, sorted_radial;
        for (std::size_t k : order) {
            sorted_angles.push_back(angles[k]);
            sorted_radial.push_back(probe.radial.back()[k]);
        }
        return Gauge::sampled2d(std::move(sorted_angles), std::move(sorted_radial)).canonicalized();
    }
    return Gauge::sampled_points(dirs, probe.radial.back()).canonicalized();
}

}  // namespace mirror_margin
