#pragma once

#include <functional>
#include <string>

#include "mirror_margin/linalg.hpp"

namespace mirror_margin {

enum class LossKind { Exponential, Logistic, Custom };

struct RiskValue {
    double value;      // may underflow to 0 late in training
    double log_value;  // always finite while margins are finite
};

/// Exponential-tailed classification loss and the empirical risk
/// L(beta) = sum_i l((Z beta)_i) with log-domain arithmetic throughout.
class Loss {
public:
    static Loss exponential();
    static Loss logistic();
    // Tail and shape assumptions are validated at construction; losses with
    // polynomial tails are rejected.
    static Loss custom(std::function<double(double)> loss,
                       std::function<double(double)> dloss,
                       std::function<double(double)> loss_inverse);
    static Loss by_name(const std::string& name);

    LossKind kind() const { return kind_; }

    double loss(double z) const;
    double dloss(double z) const;
    double loss_inverse(double y) const;

    double log_loss(double z) const;       // log l(z)
    double log_neg_dloss(double z) const;  // log(-l'(z))

    RiskValue risk(const Matrix& Z, const Vec& beta) const;
    Vec risk_gradient(const Matrix& Z, const Vec& beta) const;

    // q(beta) in (0,1]^n; equals softmax(-Z beta) for the exponential loss.
    Vec q_vector(const Matrix& Z, const Vec& beta) const;
    Vec log_q_vector(const Matrix& Z, const Vec& beta) const;

    // a = -l'(l^{-1}(L)) > 0; equals L itself for the exponential loss.
    double a_scalar(const Matrix& Z, const Vec& beta) const;
    double log_a_scalar(const Matrix& Z, const Vec& beta) const;

private:
    Loss() = default;
    Vec margins(const Matrix& Z, const Vec& beta) const;

    LossKind kind_ = LossKind::Exponential;
    std::function<double(double)> f_, df_, finv_;
};

}  // namespace mirror_margin
