#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mirror_margin {

using Vec = std::vector<double>;

// Dense row-major matrix. Sized for desk-scale problems (n <= 1e3, d <= 1e2).
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    Vec row(std::size_t i) const {
        return Vec(data.begin() + static_cast<std::ptrdiff_t>(i * cols),
                   data.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
    }
};

inline double dot(const Vec& a, const Vec& b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm_inf(const Vec& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

// Scaled to survive entries near the double range limits (hyperbolic-entropy
// trajectories reach |beta| ~ 1e200 before the stopping rule fires).
inline double norm2(const Vec& a) {
    double m = norm_inf(a);
    if (m == 0.0 || !std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : a) {
        double r = x / m;
        s += r * r;
    }
    return m * std::sqrt(s);
}

inline double norm1(const Vec& a) {
    double s = 0.0;
    for (double x : a) s += std::abs(x);
    return s;
}

inline Vec operator+(Vec a, const Vec& b) {
    assert(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

inline Vec operator-(Vec a, const Vec& b) {
    assert(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

inline Vec operator*(double c, Vec a) {
    for (double& x : a) x *= c;
    return a;
}

inline Vec matvec(const Matrix& m, const Vec& v) {
    if (v.size() != m.cols) throw std::invalid_argument("matvec: dimension mismatch");
    Vec out(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out[i] += m(i, j) * v[j];
    return out;
}

// m^T v
inline Vec matvec_t(const Matrix& m, const Vec& v) {
    if (v.size() != m.rows) throw std::invalid_argument("matvec_t: dimension mismatch");
    Vec out(m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out[j] += m(i, j) * v[i];
    return out;
}

inline Vec normalized(const Vec& v) {
    double m = norm_inf(v);
    if (m == 0.0) throw std::invalid_argument("normalized: zero vector");
    Vec w = (1.0 / m) * v;
    return (1.0 / norm2(w)) * w;
}

inline double cosine_similarity(const Vec& a, const Vec& b) {
    return dot(normalized(a), normalized(b));
}

inline double log_sum_exp(const Vec& v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

}  // namespace mirror_margin
