#include "mirror_margin/potentials.hpp"

#include <cmath>

#include "mirror_margin/errors.hpp"

namespace mirror_margin {

namespace {

constexpr double kLog2 = 0.6931471805599453;

// Solve df(x) = u for a strictly increasing odd derivative with no closed
// form: geometric bracket growth, then Newton clamped into the bracket with
// bisection fallback.
double invert_increasing_deriv(const std::function<double(double)>& df,
                               const std::function<double(double)>& ddf, double u) {
    if (u == 0.0) return 0.0;
    double sign = u > 0.0 ? 1.0 : -1.0;
    double t = std::abs(u);

    double hi = 1.0;
    for (int i = 0; i < 2200 && df(hi) < t; ++i) hi *= 2.0;
    if (df(hi) < t) throw NumericError("inverse_deriv: bracket growth failed", t - df(hi));
    double lo = 0.0;

    double x = std::min(t, hi);
    double resid = df(x) - t;
    for (int it = 0; it < 200; ++it) {
        if (std::abs(resid) <= 1e-14 * (1.0 + t)) return sign * x;
        if (resid > 0.0) hi = x; else lo = x;

        double slope = ddf(x);
        double xn = slope > 0.0 ? x - resid / slope : x;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        x = xn;
        resid = df(x) - t;
        if (hi - lo <= 1e-15 * (1.0 + hi)) return sign * x;
    }
    throw NumericError("inverse_deriv: no convergence after max iterations", resid);
}

// Solve f(x) = y on [0, inf) for strictly increasing f with f(0) = 0.
double invert_increasing_value(const std::function<double(double)>& f, double y) {
    if (y <= 0.0) return 0.0;
    double hi = 1.0;
    for (int i = 0; i < 2200 && f(hi) < y; ++i) hi *= 2.0;
    if (f(hi) < y) throw NumericError("value_inverse: bracket growth failed", y - f(hi));
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) < y) lo = mid; else hi = mid;
        if (hi - lo <= 1e-15 * (1.0 + hi)) break;
    }
    return 0.5 * (lo + hi);
}

double hyp_value(double x) {
    // x*asinh(x) - sqrt(x^2 + 1) + 1, hypot avoids overflow for |x| > 1e154
    return x * std::asinh(x) - std::hypot(x, 1.0) + 1.0;
}

}  // namespace

ScalarPotential ScalarPotential::quadratic() {
    ScalarPotential s;
    s.kind_ = ScalarKind::Quadratic;
    return s;
}

ScalarPotential ScalarPotential::power(double p) {
    if (!(p > 1.0)) throw ContractViolation("power potential requires p > 1");
    ScalarPotential s;
    s.kind_ = ScalarKind::PowerP;
    s.p_ = p;
    return s;
}

ScalarPotential ScalarPotential::cosh_entropy() {
    ScalarPotential s;
    s.kind_ = ScalarKind::CoshEntropy;
    return s;
}

ScalarPotential ScalarPotential::hyp_entropy() {
    ScalarPotential s;
    s.kind_ = ScalarKind::HypEntropy;
    return s;
}

ScalarPotential ScalarPotential::custom(std::function<double(double)> value,
                                        std::function<double(double)> deriv,
                                        std::function<double(double)> second_deriv) {
    ScalarPotential s;
    s.kind_ = ScalarKind::Custom;
    s.f_ = std::move(value);
    s.df_ = std::move(deriv);
    s.ddf_ = std::move(second_deriv);

    // Validate on a probe grid rather than trusting the caller.
    if (std::abs(s.f_(0.0)) > 1e-10) throw ContractViolation("custom potential: value(0) != 0");
    double prev_df = s.df_(-5.0 - 0.25);
    for (double x = -5.0; x <= 5.0; x += 0.25) {
        if (std::abs(s.f_(x) - s.f_(-x)) > 1e-8 * (1.0 + std::abs(s.f_(x))))
            throw ContractViolation("custom potential: value is not even");
        if (!(s.ddf_(x) > 0.0))
            throw ContractViolation("custom potential: second derivative not positive");
        double d = s.df_(x);
        if (!(d > prev_df)) throw ContractViolation("custom potential: derivative not increasing");
        prev_df = d;
    }
    return s;
}

double ScalarPotential::value(double x) const {
    switch (kind_) {
        case ScalarKind::Quadratic: return 0.5 * x * x;
        case ScalarKind::PowerP: return std::pow(std::abs(x), p_);
        case ScalarKind::CoshEntropy: return std::cosh(x) - 1.0;
        case ScalarKind::HypEntropy: return hyp_value(x);
        case ScalarKind::Custom: return f_(x);
    }
    return 0.0;
}

double ScalarPotential::deriv(double x) const {
    switch (kind_) {
        case ScalarKind::Quadratic: return x;
        case ScalarKind::PowerP:
            return x == 0.0 ? 0.0 : p_ * std::pow(std::abs(x), p_ - 1.0) * (x > 0.0 ? 1.0 : -1.0);
        case ScalarKind::CoshEntropy: return std::sinh(x);
        case ScalarKind::HypEntropy: return std::asinh(x);
        case ScalarKind::Custom: return df_(x);
    }
    return 0.0;
}

double ScalarPotential::second_deriv(double x) const {
    switch (kind_) {
        case ScalarKind::Quadratic: return 1.0;
        case ScalarKind::PowerP:
            return p_ * (p_ - 1.0) * std::pow(std::abs(x), p_ - 2.0);
        case ScalarKind::CoshEntropy: return std::cosh(x);
        case ScalarKind::HypEntropy: return 1.0 / std::hypot(x, 1.0);
        case ScalarKind::Custom: return ddf_(x);
    }
    return 0.0;
}

double ScalarPotential::inverse_deriv(double u) const {
    switch (kind_) {
        case ScalarKind::Quadratic: return u;
        case ScalarKind::PowerP:
            return u == 0.0 ? 0.0
                            : (u > 0.0 ? 1.0 : -1.0) * std::pow(std::abs(u) / p_, 1.0 / (p_ - 1.0));
        case ScalarKind::CoshEntropy: return std::asinh(u);
        case ScalarKind::HypEntropy: return std::sinh(u);
        case ScalarKind::Custom:
            return invert_increasing_deriv(df_, ddf_, u);
    }
    return 0.0;
}

double ScalarPotential::value_inverse(double y) const {
    if (y < 0.0) throw ContractViolation("value_inverse: negative level");
    switch (kind_) {
        case ScalarKind::Quadratic: return std::sqrt(2.0 * y);
        case ScalarKind::PowerP: return std::pow(y, 1.0 / p_);
        case ScalarKind::CoshEntropy:
            // acosh(1 + y); the large branch avoids overflow of y * (y + 2)
            if (y > 1e12) return std::log(2.0) + std::log1p(y);
            return std::log1p(y + std::sqrt(y * (y + 2.0)));
        case ScalarKind::HypEntropy:
            return invert_increasing_value(hyp_value, y);
        case ScalarKind::Custom:
            return invert_increasing_value(f_, y);
    }
    return 0.0;
}

double ScalarPotential::log_value(double x) const {
    double t = std::abs(x);
    switch (kind_) {
        case ScalarKind::Quadratic: return 2.0 * std::log(t) - kLog2;
        case ScalarKind::PowerP: return p_ * std::log(t);
        case ScalarKind::CoshEntropy:
            if (t < 1e-8) return 2.0 * std::log(t) - kLog2;
            if (t < 700.0) return std::log(std::cosh(t) - 1.0);
            return t - kLog2;  // log(e^t/2 - 1), tail below 1e-300
        case ScalarKind::HypEntropy:
            return std::log(hyp_value(t));
        case ScalarKind::Custom:
            throw ContractViolation("custom potential has no log-domain evaluation");
    }
    return 0.0;
}

double ScalarPotential::log_value_inverse_from_log(double log_y) const {
    switch (kind_) {
        case ScalarKind::Quadratic: return 0.5 * (log_y + kLog2);
        case ScalarKind::PowerP: return log_y / p_;
        case ScalarKind::CoshEntropy:
            if (log_y < 700.0) return std::log(value_inverse(std::exp(log_y)));
            return std::log(log_y + kLog2);
        case ScalarKind::HypEntropy: {
            if (log_y < 700.0) return std::log(value_inverse(std::exp(log_y)));
            // Solve t + log(t + log2 - 1) = log_y for t = log(x); at this scale
            // phi(x) = x*(asinh(x) - 1) up to terms below double resolution.
            double t = log_y - std::log(log_y);
            for (int i = 0; i < 60; ++i) {
                double g = t + std::log(t + kLog2 - 1.0) - log_y;
                double gp = 1.0 + 1.0 / (t + kLog2 - 1.0);
                double step = g / gp;
                t -= step;
                if (std::abs(step) < 1e-14 * (1.0 + std::abs(t))) break;
            }
            return t;
        }
        case ScalarKind::Custom:
            throw ContractViolation("custom potential has no log-domain evaluation");
    }
    return 0.0;
}

VectorPotential VectorPotential::separable(ScalarPotential s, std::size_t dim) {
    if (dim == 0) throw ContractViolation("potential dimension must be positive");
    VectorPotential p;
    p.dim_ = dim;
    p.uniform_ = true;
    p.coords_.assign(dim, s);
    return p;
}

VectorPotential VectorPotential::per_coordinate(std::vector<ScalarPotential> coords) {
    if (coords.empty()) throw ContractViolation("potential dimension must be positive");
    VectorPotential p;
    p.dim_ = coords.size();
    p.uniform_ = false;
    p.coords_ = std::move(coords);
    return p;
}

VectorPotential VectorPotential::general(std::size_t dim,
                                         std::function<double(const Vec&)> value,
                                         std::function<Vec(const Vec&)> gradient) {
    if (dim == 0) throw ContractViolation("potential dimension must be positive");
    VectorPotential p;
    p.dim_ = dim;
    p.value_fn_ = std::move(value);
    p.grad_fn_ = std::move(gradient);
    return p;
}

bool VectorPotential::is_separable() const { return uniform_; }

const ScalarPotential& VectorPotential::scalar() const {
    if (!uniform_) throw ContractViolation("potential is not separable with a single scalar");
    return coords_.front();
}

void VectorPotential::require_dim(const Vec& v, const char* op) const {
    if (v.size() != dim_) throw ContractViolation(std::string(op) + ": dimension mismatch");
}

double VectorPotential::value(const Vec& beta) const {
    require_dim(beta, "value");
    if (!coords_.empty()) {
        double s = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) s += coords_[k].value(beta[k]);
        return s;
    }
    return value_fn_(beta);
}

Vec VectorPotential::mirror_map(const Vec& beta) const {
    require_dim(beta, "mirror_map");
    if (!coords_.empty()) {
        Vec g(dim_);
        for (std::size_t k = 0; k < dim_; ++k) g[k] = coords_[k].deriv(beta[k]);
        return g;
    }
    return grad_fn_(beta);
}

Vec VectorPotential::hessian_diag(const Vec& beta) const {
    require_dim(beta, "hessian_diag");
    if (coords_.empty())
        throw ContractViolation("hessian_diag: only available for coordinatewise potentials");
    Vec h(dim_);
    for (std::size_t k = 0; k < dim_; ++k) h[k] = coords_[k].second_deriv(beta[k]);
    return h;
}

Vec VectorPotential::inverse_mirror_map(const Vec& u) const {
    require_dim(u, "inverse_mirror_map");
    if (coords_.empty())
        throw ContractViolation("inverse_mirror_map: only available for coordinatewise potentials");
    Vec beta(dim_);
    for (std::size_t k = 0; k < dim_; ++k) beta[k] = coords_[k].inverse_deriv(u[k]);
    return beta;
}

double VectorPotential::bregman(const Vec& beta, const Vec& beta0) const {
    require_dim(beta, "bregman");
    require_dim(beta0, "bregman");
    return value(beta) - value(beta0) - dot(mirror_map(beta0), beta - beta0);
}

}  // namespace mirror_margin
