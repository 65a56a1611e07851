#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mirror_margin/gauge.hpp"
#include "mirror_margin/linalg.hpp"

namespace mirror_margin {

/// Immutable classification dataset with labels in {-1, +1} and the cached
/// signed feature matrix Z (row i = y_i x_i).
struct Dataset {
    Matrix X;
    Vec y;
    Matrix Z;

    std::size_t n() const { return X.rows; }
    std::size_t d() const { return X.cols; }

    static Dataset from_points(Matrix X, Vec y);
    static Dataset load_csv(const std::string& path);
    void save_csv(const std::string& path) const;
};

struct SeparabilityReport {
    bool separable = false;
    std::optional<Vec> witness;
    double delta = 0.0;  // optimal margin of the box-constrained LP
};

/// LP feasibility check:  max delta  s.t.  Z beta >= delta 1,  |beta|_inf <= 1.
SeparabilityReport check_separable(const Dataset& ds, double tau_sep = 1e-9);

struct MarginReport {
    double margin = 0.0;
    std::vector<std::size_t> support_indices;
};

/// Margin of the gauge-normalized direction beta / gauge(beta).
MarginReport margin_of(const Dataset& ds, const Vec& beta, const Gauge& norm,
                       double tau_support = 1e-6);

/// Two Gaussian clouds, re-sampled (bounded retries) until separable.
Dataset generate_blobs(int n_pos, int n_neg, const Vec& center_pos, const Vec& center_neg,
                       double spread, std::uint64_t seed);

}  // namespace mirror_margin
