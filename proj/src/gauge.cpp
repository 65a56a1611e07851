#include "mirror_margin/gauge.hpp"

#include <algorithm>
#include <cmath>

#include "mirror_margin/errors.hpp"

namespace mirror_margin {

namespace {

double lp_norm(const Vec& v, double p) {
    double m = norm_inf(v);
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (double x : v) s += std::pow(std::abs(x) / m, p);
    return m * std::pow(s, 1.0 / p);
}

}  // namespace

Gauge Gauge::l1() {
    Gauge g;
    g.kind_ = GaugeKind::L1;
    return g;
}

Gauge Gauge::l2() {
    Gauge g;
    g.kind_ = GaugeKind::L2;
    return g;
}

Gauge Gauge::linf() {
    Gauge g;
    g.kind_ = GaugeKind::Linf;
    return g;
}

Gauge Gauge::lp(double p) {
    if (!(p > 1.0)) throw ContractViolation("lp gauge requires p > 1");
    Gauge g;
    g.kind_ = GaugeKind::Lp;
    g.p_ = p;
    return g;
}

Gauge Gauge::sampled2d(std::vector<double> angles, std::vector<double> radial) {
    if (angles.size() != radial.size() || angles.size() < 3)
        throw ContractViolation("sampled2d gauge: need matching angle/radial grids");
    if (!std::is_sorted(angles.begin(), angles.end()))
        throw ContractViolation("sampled2d gauge: angles must be sorted");
    for (double r : radial)
        if (!(r > 0.0)) throw ContractViolation("sampled2d gauge: radial values must be positive");
    Gauge g;
    g.kind_ = GaugeKind::Sampled;
    g.angles_ = std::move(angles);
    g.radial_ = std::move(radial);
    return g;
}

Gauge Gauge::sampled_points(std::vector<Vec> directions, std::vector<double> radial) {
    if (directions.size() != radial.size() || directions.empty())
        throw ContractViolation("sampled gauge: need matching direction/radial grids");
    for (double r : radial)
        if (!(r > 0.0)) throw ContractViolation("sampled gauge: radial values must be positive");
    Gauge g;
    g.kind_ = GaugeKind::Sampled;
    g.dirs_ = std::move(directions);
    g.radial_ = std::move(radial);
    return g;
}

Gauge Gauge::by_name(const std::string& name) {
    if (name == "l1") return l1();
    if (name == "l2") return l2();
    if (name == "linf") return linf();
    throw ContractViolation("unknown gauge: " + name);
}

double Gauge::radial_at(const Vec& direction) const {
    if (!angles_.empty()) {
        if (direction.size() != 2) throw ContractViolation("sampled2d gauge expects dimension 2");
        double theta = std::atan2(direction[1], direction[0]);
        auto it = std::upper_bound(angles_.begin(), angles_.end(), theta);
        std::size_t hi = static_cast<std::size_t>(it - angles_.begin());
        std::size_t lo;
        double a_lo, a_hi;
        if (hi == 0 || hi == angles_.size()) {
            // wrap between last and first grid angle
            lo = angles_.size() - 1;
            hi = 0;
            a_lo = angles_.back();
            a_hi = angles_.front() + 2.0 * M_PI;
            if (theta < angles_.front()) theta += 2.0 * M_PI;
        } else {
            lo = hi - 1;
            a_lo = angles_[lo];
            a_hi = angles_[hi];
        }
        double t = (a_hi > a_lo) ? (theta - a_lo) / (a_hi - a_lo) : 0.0;
        return radial_[lo] + t * (radial_[hi] - radial_[lo]);
    }
    // Nearest neighbors by inner product, averaging exact ties.
    double best = -2.0;
    for (const auto& d : dirs_) best = std::max(best, dot(d, direction));
    double sum = 0.0;
    int count = 0;
    for (std::size_t k = 0; k < dirs_.size(); ++k) {
        if (dot(dirs_[k], direction) >= best - 1e-9) {
            sum += radial_[k];
            ++count;
        }
    }
    return sum / count;
}

double Gauge::operator()(const Vec& beta) const {
    double n2 = norm2(beta);
    if (n2 == 0.0) return 0.0;
    switch (kind_) {
        case GaugeKind::L1: return scale_ * norm1(beta);
        case GaugeKind::L2: return scale_ * n2;
        case GaugeKind::Linf: return scale_ * norm_inf(beta);
        case GaugeKind::Lp: return scale_ * lp_norm(beta, p_);
        case GaugeKind::Sampled: return scale_ * n2 / radial_at(normalized(beta));
    }
    return 0.0;
}

double Gauge::dual(const Vec& v) const {
    switch (kind_) {
        case GaugeKind::L1: return norm_inf(v) / scale_;
        case GaugeKind::L2: return norm2(v) / scale_;
        case GaugeKind::Linf: return norm1(v) / scale_;
        case GaugeKind::Lp: return lp_norm(v, p_ / (p_ - 1.0)) / scale_;
        case GaugeKind::Sampled: {
            double best = -std::numeric_limits<double>::infinity();
            if (!angles_.empty()) {
                for (std::size_t k = 0; k < angles_.size(); ++k) {
                    double r = radial_[k] / scale_;
                    best = std::max(best, r * (v[0] * std::cos(angles_[k]) +
                                               v[1] * std::sin(angles_[k])));
                }
            } else {
                for (std::size_t k = 0; k < dirs_.size(); ++k)
                    best = std::max(best, (radial_[k] / scale_) * dot(dirs_[k], v));
            }
            return best;
        }
    }
    return 0.0;
}

bool Gauge::in_subdifferential(const Vec& beta, const Vec& v, double tol) const {
    if (norm2(beta) == 0.0) throw ContractViolation("subdifferential requires beta != 0");
    double g = (*this)(beta);
    if (std::abs(dot(v, beta) - g) > tol * (1.0 + g)) return false;
    return dual(v) <= 1.0 + tol;
}

std::vector<Vec> Gauge::subdifferential_vertices(const Vec& beta, double tol) const {
    if (norm2(beta) == 0.0) throw ContractViolation("subdifferential requires beta != 0");
    const std::size_t d = beta.size();
    switch (kind_) {
        case GaugeKind::L2:
            return {scale_ * normalized(beta)};
        case GaugeKind::Lp: {
            double np = lp_norm(beta, p_);
            Vec v(d);
            for (std::size_t i = 0; i < d; ++i)
                v[i] = scale_ * std::copysign(std::pow(std::abs(beta[i]) / np, p_ - 1.0), beta[i]);
            return {v};
        }
        case GaugeKind::L1: {
            std::vector<std::size_t> free_idx;
            Vec base(d);
            for (std::size_t i = 0; i < d; ++i) {
                if (std::abs(beta[i]) > tol) base[i] = scale_ * std::copysign(1.0, beta[i]);
                else free_idx.push_back(i);
            }
            if (free_idx.size() > 16)
                throw ContractViolation("l1 subdifferential: too many zero coordinates to enumerate");
            std::vector<Vec> out;
            for (std::size_t mask = 0; mask < (std::size_t{1} << free_idx.size()); ++mask) {
                Vec v = base;
                for (std::size_t b = 0; b < free_idx.size(); ++b)
                    v[free_idx[b]] = (mask >> b) & 1 ? scale_ : -scale_;
                out.push_back(std::move(v));
            }
            return out;
        }
        case GaugeKind::Linf: {
            double m = norm_inf(beta);
            std::vector<Vec> out;
            for (std::size_t i = 0; i < d; ++i) {
                if (std::abs(beta[i]) >= m * (1.0 - tol)) {
                    Vec v(d, 0.0);
                    v[i] = scale_ * std::copysign(1.0, beta[i]);
                    out.push_back(std::move(v));
                }
            }
            return out;
        }
        case GaugeKind::Sampled: {
            if (angles_.empty())
                return {};  // membership test only for d >= 3 grids
            Vec dir = normalized(beta);
            double theta = std::atan2(dir[1], dir[0]);
            const std::size_t m = angles_.size();
            auto boundary_pt = [&](std::size_t k) {
                double r = radial_[k] / scale_;
                return Vec{r * std::cos(angles_[k]), r * std::sin(angles_[k])};
            };
            // facet normal through boundary points k and k+1
            auto facet_normal = [&](std::size_t k) {
                Vec u = boundary_pt(k), w = boundary_pt((k + 1) % m);
                double det = u[0] * w[1] - u[1] * w[0];
                return Vec{(w[1] - u[1]) / det, (u[0] - w[0]) / det};
            };
            auto it = std::upper_bound(angles_.begin(), angles_.end(), theta);
            std::size_t hi = static_cast<std::size_t>(it - angles_.begin()) % m;
            std::size_t lo = (hi + m - 1) % m;
            if (std::abs(theta - angles_[lo]) < 1e-12)
                return {facet_normal((lo + m - 1) % m), facet_normal(lo)};
            return {facet_normal(lo)};
        }
    }
    return {};
}

Gauge Gauge::scaled(double factor) const {
    if (!(factor > 0.0)) throw ContractViolation("gauge scale must be positive");
    Gauge g = *this;
    g.scale_ *= factor;
    return g;
}

Gauge Gauge::canonicalized() const {
    if (kind_ != GaugeKind::Sampled) return *this;
    double min_r = *std::min_element(radial_.begin(), radial_.end());
    Gauge g = *this;
    g.scale_ = min_r;
    return g;
}

}  // namespace mirror_margin
