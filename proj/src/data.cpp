#include "mirror_margin/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "mirror_margin/errors.hpp"
#include "mirror_margin/simplex.hpp"

namespace mirror_margin {

Dataset Dataset::from_points(Matrix X, Vec y) {
    if (X.rows == 0 || X.cols == 0) throw ContractViolation("dataset must be non-empty");
    if (y.size() != X.rows) throw ContractViolation("label count does not match point count");
    for (double v : y)
        if (v != 1.0 && v != -1.0) throw ContractViolation("labels must be +1 or -1");
    Dataset ds;
    ds.Z = Matrix(X.rows, X.cols);
    for (std::size_t i = 0; i < X.rows; ++i)
        for (std::size_t j = 0; j < X.cols; ++j) ds.Z(i, j) = y[i] * X(i, j);
    ds.X = std::move(X);
    ds.y = std::move(y);
    return ds;
}

Dataset Dataset::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ContractViolation("cannot open dataset file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ContractViolation("empty dataset file: " + path);

    std::size_t cols = 1;
    for (char c : line)
        if (c == ',') ++cols;
    if (cols < 2) throw ContractViolation("dataset header needs x1,...,xd,y");
    std::size_t d = cols - 1;

    std::vector<double> xs;
    Vec y;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        for (std::size_t j = 0; j < d; ++j) {
            if (!std::getline(ss, cell, ',')) throw ContractViolation("short row in " + path);
            xs.push_back(std::stod(cell));
        }
        if (!std::getline(ss, cell, ',')) throw ContractViolation("missing label in " + path);
        y.push_back(std::stod(cell));
    }
    Matrix X(y.size(), d);
    X.data = std::move(xs);
    return from_points(std::move(X), std::move(y));
}

void Dataset::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write dataset file: " + path);
    for (std::size_t j = 0; j < d(); ++j) out << "x" << (j + 1) << ",";
    out << "y\n";
    out.precision(17);
    for (std::size_t i = 0; i < n(); ++i) {
        for (std::size_t j = 0; j < d(); ++j) out << X(i, j) << ",";
        out << static_cast<int>(y[i]) << "\n";
    }
}

SeparabilityReport check_separable(const Dataset& ds, double tau_sep) {
    const std::size_t n = ds.n(), d = ds.d();
    // Variables: beta = a - b with a, b in [0,1]^d, plus delta >= 0.
    const std::size_t nv = 2 * d + 1;
    Vec c(nv, 0.0);
    c[2 * d] = -1.0;  // max delta

    std::vector<LpRow> rows;
    for (std::size_t i = 0; i < n; ++i) {
        Vec a(nv, 0.0);
        for (std::size_t j = 0; j < d; ++j) {
            a[j] = ds.Z(i, j);
            a[d + j] = -ds.Z(i, j);
        }
        a[2 * d] = -1.0;
        rows.push_back({std::move(a), RowType::Ge, 0.0});
    }
    for (std::size_t j = 0; j < 2 * d; ++j) {
        Vec a(nv, 0.0);
        a[j] = 1.0;
        rows.push_back({std::move(a), RowType::Le, 1.0});
    }

    LpResult lp = solve_lp(c, rows);
    if (lp.status != LpStatus::Optimal) throw NumericError("separability LP failed");

    SeparabilityReport rep;
    rep.delta = -lp.objective;
    rep.separable = rep.delta > tau_sep;
    if (rep.separable) {
        Vec w(d);
        for (std::size_t j = 0; j < d; ++j) w[j] = lp.x[j] - lp.x[d + j];
        rep.witness = std::move(w);
    }
    return rep;
}

MarginReport margin_of(const Dataset& ds, const Vec& beta, const Gauge& norm,
                       double tau_support) {
    if (beta.size() != ds.d()) throw ContractViolation("margin_of: dimension mismatch");
    double g = norm(beta);
    if (g == 0.0) throw ContractViolation("margin_of: zero vector");
    Vec margins = matvec(ds.Z, (1.0 / g) * beta);

    MarginReport rep;
    rep.margin = *std::min_element(margins.begin(), margins.end());
    double tol = tau_support * std::max(1.0, std::abs(rep.margin));
    for (std::size_t i = 0; i < margins.size(); ++i)
        if (margins[i] - rep.margin <= tol) rep.support_indices.push_back(i);
    return rep;
}

Dataset generate_blobs(int n_pos, int n_neg, const Vec& center_pos, const Vec& center_neg,
                       double spread, std::uint64_t seed) {
    if (n_pos < 1 || n_neg < 1) throw ContractViolation("generate_blobs: need points on both sides");
    if (center_pos.size() != center_neg.size())
        throw ContractViolation("generate_blobs: center dimension mismatch");
    const std::size_t d = center_pos.size();

    constexpr int kMaxRetries = 32;
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
        std::normal_distribution<double> noise(0.0, 1.0);

        Matrix X(static_cast<std::size_t>(n_pos + n_neg), d);
        Vec y(X.rows);
        for (std::size_t i = 0; i < X.rows; ++i) {
            bool pos = i < static_cast<std::size_t>(n_pos);
            const Vec& center = pos ? center_pos : center_neg;
            y[i] = pos ? 1.0 : -1.0;
            for (std::size_t j = 0; j < d; ++j) X(i, j) = center[j] + spread * noise(rng);
        }
        Dataset ds = Dataset::from_points(std::move(X), std::move(y));
        if (spread == 0.0 || check_separable(ds).separable) return ds;
    }
    throw GenerationError(
        "generate_blobs: no separable sample after max retries; increase the center gap or "
        "reduce the spread");
}

}  // namespace mirror_margin
