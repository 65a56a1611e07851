#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mirror_margin/linalg.hpp"

namespace mirror_margin {

enum class ScalarKind { Quadratic, PowerP, CoshEntropy, HypEntropy, Custom };

/// One-dimensional mirror potential building block. Even, strictly convex,
/// vanishing at 0, with a strictly increasing unbounded derivative.
class ScalarPotential {
public:
    static ScalarPotential quadratic();
    static ScalarPotential power(double p);  // |x|^p, p > 1
    static ScalarPotential cosh_entropy();   // cosh(x) - 1
    static ScalarPotential hyp_entropy();    // x*asinh(x) - sqrt(x^2+1) + 1
    // Caller supplies value/derivative/second derivative; evenness and strict
    // convexity are validated on a probe grid at construction.
    static ScalarPotential custom(std::function<double(double)> value,
                                  std::function<double(double)> deriv,
                                  std::function<double(double)> second_deriv);

    ScalarKind kind() const { return kind_; }
    double power_exponent() const { return p_; }

    double value(double x) const;
    double deriv(double x) const;
    double second_deriv(double x) const;

    // (phi')^{-1}: closed form where available, otherwise safeguarded Newton
    // with a bisection fallback on the strictly increasing derivative.
    double inverse_deriv(double u) const;

    // phi^{-1} restricted to [0, inf).
    double value_inverse(double y) const;

    // Log-domain access for evaluations that overflow double (cosh-type
    // arguments show up in the horizon limit with |x| up to ~1e150).
    bool has_log_value() const { return kind_ != ScalarKind::Custom; }
    double log_value(double x) const;                  // log(phi(x))
    double log_value_inverse_from_log(double log_y) const;  // log(phi^{-1}(y)) given log(y)

private:
    ScalarPotential() = default;

    ScalarKind kind_ = ScalarKind::Quadratic;
    double p_ = 2.0;
    std::function<double(double)> f_, df_, ddf_;
};

/// Potential over R^d: separable (one scalar per coordinate) or a general
/// value/gradient pair. Immutable after construction.
class VectorPotential {
public:
    // Same scalar potential in every coordinate (the horizon-formula case).
    static VectorPotential separable(ScalarPotential s, std::size_t dim);
    // Different scalar per coordinate, e.g. the x^2 + y^4 degeneracy probe.
    static VectorPotential per_coordinate(std::vector<ScalarPotential> coords);
    // General pair; only value/gradient/bregman are available.
    static VectorPotential general(std::size_t dim,
                                   std::function<double(const Vec&)> value,
                                   std::function<Vec(const Vec&)> gradient);

    std::size_t dim() const { return dim_; }
    bool is_coordinatewise() const { return !coords_.empty(); }
    // True when every coordinate shares one scalar (Assumption-4 shape).
    bool is_separable() const;
    const ScalarPotential& scalar() const;
    const ScalarPotential& scalar_at(std::size_t k) const { return coords_.at(k); }

    double value(const Vec& beta) const;
    Vec mirror_map(const Vec& beta) const;
    Vec hessian_diag(const Vec& beta) const;  // coordinatewise potentials only
    Vec inverse_mirror_map(const Vec& u) const;
    double bregman(const Vec& beta, const Vec& beta0) const;

private:
    VectorPotential() = default;
    void require_dim(const Vec& v, const char* op) const;

    std::size_t dim_ = 0;
    bool uniform_ = false;
    std::vector<ScalarPotential> coords_;
    std::function<double(const Vec&)> value_fn_;
    std::function<Vec(const Vec&)> grad_fn_;
};

}  // namespace mirror_margin
