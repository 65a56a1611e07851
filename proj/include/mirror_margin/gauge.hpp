#pragma once

#include <string>
#include <vector>

#include "mirror_margin/linalg.hpp"

namespace mirror_margin {

enum class GaugeKind { L1, L2, Linf, Lp, Sampled };

/// Positively homogeneous convex function, positive off the origin. Sampled
/// gauges come from numeric horizon probes and need not be symmetric under
/// negation.
class Gauge {
public:
    static Gauge l1();
    static Gauge l2();
    static Gauge linf();
    static Gauge lp(double p);
    // d = 2: unit-ball boundary as radial values over sorted angles in [-pi, pi).
    static Gauge sampled2d(std::vector<double> angles, std::vector<double> radial);
    // d >= 3: radial values at unit direction points, nearest-neighbor with averaging.
    static Gauge sampled_points(std::vector<Vec> directions, std::vector<double> radial);
    static Gauge by_name(const std::string& name);

    GaugeKind kind() const { return kind_; }
    double scale() const { return scale_; }
    double lp_exponent() const { return p_; }

    double operator()(const Vec& beta) const;
    // Dual gauge (support function of the unit ball); exact for named kinds,
    // grid supremum for sampled ones.
    double dual(const Vec& v) const;

    // v in d(gauge)(beta) iff <v, beta> = gauge(beta) and dual(v) <= 1.
    bool in_subdifferential(const Vec& beta, const Vec& v, double tol) const;
    // Extreme points of the subdifferential set (named kinds and 2-d sampled).
    std::vector<Vec> subdifferential_vertices(const Vec& beta, double tol = 1e-9) const;

    Gauge scaled(double factor) const;
    // Rescale so the maximum over the l2 unit sphere equals 1.
    Gauge canonicalized() const;

private:
    Gauge() = default;
    double radial_at(const Vec& direction) const;  // sampled kinds

    GaugeKind kind_ = GaugeKind::L2;
    double scale_ = 1.0;
    double p_ = 2.0;
    std::vector<double> angles_, radial_;  // sampled 2-d
    std::vector<Vec> dirs_;                // sampled d >= 3
};

}  // namespace mirror_margin
