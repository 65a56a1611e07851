#include "mirror_margin/losses.hpp"

#include <cmath>

#include "mirror_margin/errors.hpp"

namespace mirror_margin {

namespace {

double stable_log1pexp(double x) {
    // log(1 + e^x)
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

}  // namespace

Loss Loss::exponential() {
    Loss l;
    l.kind_ = LossKind::Exponential;
    return l;
}

Loss Loss::logistic() {
    Loss l;
    l.kind_ = LossKind::Logistic;
    return l;
}

Loss Loss::custom(std::function<double(double)> loss, std::function<double(double)> dloss,
                  std::function<double(double)> loss_inverse) {
    Loss l;
    l.kind_ = LossKind::Custom;
    l.f_ = std::move(loss);
    l.df_ = std::move(dloss);
    l.finv_ = std::move(loss_inverse);

    // Shape probes: convex, decreasing, positive.
    double prev = l.f_(-5.0);
    double prev_d = l.df_(-5.0);
    for (double z = -4.5; z <= 5.0; z += 0.5) {
        double v = l.f_(z);
        double d = l.df_(z);
        if (!(v > 0.0) || !(v < prev)) throw ContractViolation("loss must be positive decreasing");
        if (d < prev_d - 1e-12) throw ContractViolation("loss must be convex");
        prev = v;
        prev_d = d;
    }
    // Exponential tail is required by the theory; polynomial tails fail here.
    for (double z : {10.0, 20.0, 30.0}) {
        double ez = std::exp(-z);
        if (std::abs(l.f_(z) / ez - 1.0) > 1e-3 || std::abs(-l.df_(z) / ez - 1.0) > 1e-3)
            throw ContractViolation("loss does not have an exponential tail");
    }
    return l;
}

Loss Loss::by_name(const std::string& name) {
    if (name == "exponential") return exponential();
    if (name == "logistic") return logistic();
    throw ContractViolation("unknown loss: " + name);
}

double Loss::loss(double z) const {
    switch (kind_) {
        case LossKind::Exponential: return std::exp(-z);
        case LossKind::Logistic: return stable_log1pexp(-z);
        case LossKind::Custom: return f_(z);
    }
    return 0.0;
}

double Loss::dloss(double z) const {
    switch (kind_) {
        case LossKind::Exponential: return -std::exp(-z);
        case LossKind::Logistic: return -1.0 / (1.0 + std::exp(z));
        case LossKind::Custom: return df_(z);
    }
    return 0.0;
}

double Loss::loss_inverse(double y) const {
    switch (kind_) {
        case LossKind::Exponential: return -std::log(y);
        case LossKind::Logistic:
            return y < 700.0 ? -std::log(std::expm1(y)) : -y;
        case LossKind::Custom: return finv_(y);
    }
    return 0.0;
}

double Loss::log_loss(double z) const {
    switch (kind_) {
        case LossKind::Exponential: return -z;
        case LossKind::Logistic:
            // l(z) = e^-z (1 - e^-z/2 + ...) for large z
            if (z > 34.0) return -z - 0.5 * std::exp(-z);
            return std::log(loss(z));
        case LossKind::Custom: return std::log(f_(z));
    }
    return 0.0;
}

double Loss::log_neg_dloss(double z) const {
    switch (kind_) {
        case LossKind::Exponential: return -z;
        case LossKind::Logistic: return -stable_log1pexp(z);
        case LossKind::Custom: return std::log(-df_(z));
    }
    return 0.0;
}

Vec Loss::margins(const Matrix& Z, const Vec& beta) const {
    if (beta.size() != Z.cols) throw ContractViolation("risk: dimension mismatch");
    return matvec(Z, beta);
}

RiskValue Loss::risk(const Matrix& Z, const Vec& beta) const {
    Vec z = margins(Z, beta);
    Vec logs(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) logs[i] = log_loss(z[i]);
    double lse = log_sum_exp(logs);
    return {std::exp(lse), lse};
}

Vec Loss::risk_gradient(const Matrix& Z, const Vec& beta) const {
    Vec z = margins(Z, beta);
    Vec d(z.size());
    // -exp(log(-l')) keeps this path consistent with q_vector/a_scalar so the
    // decomposition grad L = -a Z^T q holds to rounding.
    for (std::size_t i = 0; i < z.size(); ++i) d[i] = -std::exp(log_neg_dloss(z[i]));
    return matvec_t(Z, d);
}

Vec Loss::log_q_vector(const Matrix& Z, const Vec& beta) const {
    Vec z = margins(Z, beta);
    double log_a = log_a_scalar(Z, beta);
    Vec lq(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) lq[i] = log_neg_dloss(z[i]) - log_a;
    return lq;
}

Vec Loss::q_vector(const Matrix& Z, const Vec& beta) const {
    Vec lq = log_q_vector(Z, beta);
    Vec q(lq.size());
    for (std::size_t i = 0; i < lq.size(); ++i) q[i] = std::exp(lq[i]);
    return q;
}

double Loss::log_a_scalar(const Matrix& Z, const Vec& beta) const {
    double log_L = risk(Z, beta).log_value;
    switch (kind_) {
        case LossKind::Exponential:
            return log_L;  // -l'(l^{-1}(L)) = L
        case LossKind::Logistic:
            // a = -l'(l^{-1}(L)) = 1 - e^{-L}; for tiny L this is L(1 - L/2 + ...)
            if (log_L < -36.0) return log_L;
            return std::log(-std::expm1(-std::exp(log_L)));
        case LossKind::Custom:
            return std::log(-df_(finv_(std::exp(log_L))));
    }
    return 0.0;
}

double Loss::a_scalar(const Matrix& Z, const Vec& beta) const {
    return std::exp(log_a_scalar(Z, beta));
}

}  // namespace mirror_margin
