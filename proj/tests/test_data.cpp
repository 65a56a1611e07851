#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "mirror_margin/data.hpp"
#include "mirror_margin/errors.hpp"

using namespace mirror_margin;

namespace {

Dataset make(std::initializer_list<std::pair<Vec, double>> pts) {
    std::size_t n = pts.size(), d = pts.begin()->first.size();
    Matrix X(n, d);
    Vec y;
    std::size_t i = 0;
    for (const auto& [x, label] : pts) {
        for (std::size_t j = 0; j < d; ++j) X(i, j) = x[j];
        y.push_back(label);
        ++i;
    }
    return Dataset::from_points(std::move(X), std::move(y));
}

}  // namespace

TEST_CASE("dataset construction caches Z = y x") {
    Dataset ds = make({{{1.0, 2.0}, 1.0}, {{3.0, -1.0}, -1.0}});
    CHECK(ds.n() == 2);
    CHECK(ds.d() == 2);
    CHECK(ds.Z(0, 0) == 1.0);
    CHECK(ds.Z(0, 1) == 2.0);
    CHECK(ds.Z(1, 0) == -3.0);
    CHECK(ds.Z(1, 1) == 1.0);
}

TEST_CASE("dataset contracts") {
    CHECK_THROWS_AS(Dataset::from_points(Matrix(0, 0), {}), ContractViolation);
    Matrix X(1, 1);
    X(0, 0) = 1.0;
    CHECK_THROWS_AS(Dataset::from_points(X, {0.5}), ContractViolation);
    CHECK_THROWS_AS(Dataset::from_points(X, {1.0, -1.0}), ContractViolation);
}

TEST_CASE("separability of a symmetric pair") {
    Dataset ds = make({{{1.0, 0.0}, 1.0}, {{-1.0, 0.0}, -1.0}});
    auto rep = check_separable(ds);
    CHECK(rep.separable);
    REQUIRE(rep.witness.has_value());
    const Vec& w = *rep.witness;
    CHECK(w[0] > 0.0);
    CHECK(std::abs(w[1]) <= std::abs(w[0]) * 1e-6);  // witness proportional to (1, 0)
}

TEST_CASE("conflicting signs on a line are not separable") {
    Dataset ds = make({{{1.0}, 1.0}, {{2.0}, -1.0}});
    auto rep = check_separable(ds);
    CHECK_FALSE(rep.separable);
    CHECK_FALSE(rep.witness.has_value());
}

TEST_CASE("xor is not separable") {
    Dataset ds = make({{{1.0, 1.0}, 1.0},
                       {{-1.0, -1.0}, 1.0},
                       {{1.0, -1.0}, -1.0},
                       {{-1.0, 1.0}, -1.0}});
    CHECK_FALSE(check_separable(ds).separable);
}

TEST_CASE("separability is invariant to rotation and positive rescaling") {
    Dataset base = generate_blobs(8, 8, {2.0, 2.0}, {-2.0, -2.0}, 0.5, 17);
    double c = std::cos(0.6), s = std::sin(0.6);
    Matrix X(base.n(), 2);
    for (std::size_t i = 0; i < base.n(); ++i) {
        X(i, 0) = 3.0 * (c * base.X(i, 0) - s * base.X(i, 1));
        X(i, 1) = 3.0 * (s * base.X(i, 0) + c * base.X(i, 1));
    }
    Dataset rotated = Dataset::from_points(std::move(X), base.y);
    CHECK(check_separable(base).separable == check_separable(rotated).separable);
}

TEST_CASE("margin of a normalized direction") {
    Dataset ds = make({{{1.0, 0.0}, 1.0}, {{-1.0, 0.0}, -1.0}});
    auto rep = margin_of(ds, {2.0, 0.0}, Gauge::l2());
    CHECK(rep.margin == doctest::Approx(1.0));
    CHECK(rep.support_indices == std::vector<std::size_t>{0, 1});

    Dataset ds2 = make({{{1.0, 0.0}, 1.0}, {{0.0, 2.0}, 1.0}});
    auto rep2 = margin_of(ds2, {1.0, 1.0}, Gauge::l2());
    CHECK(rep2.margin == doctest::Approx(0.7071067811865475));
    CHECK(rep2.support_indices == std::vector<std::size_t>{0});
}

TEST_CASE("margin of a separability witness is positive") {
    Dataset ds = generate_blobs(6, 6, {2.0, 2.0}, {-2.0, -2.0}, 0.6, 3);
    auto rep = check_separable(ds);
    REQUIRE(rep.witness.has_value());
    CHECK(margin_of(ds, *rep.witness, Gauge::l2()).margin > 0.0);
}

TEST_CASE("margin contracts") {
    Dataset ds = make({{{1.0, 0.0}, 1.0}});
    CHECK_THROWS_AS(margin_of(ds, {0.0, 0.0}, Gauge::l2()), ContractViolation);
    CHECK_THROWS_AS(margin_of(ds, {1.0}, Gauge::l2()), ContractViolation);
}

TEST_CASE("blob generation is deterministic and separable") {
    Dataset a = generate_blobs(40, 40, {2.0, 2.0}, {-2.0, -2.0}, 0.7, 0);
    Dataset b = generate_blobs(40, 40, {2.0, 2.0}, {-2.0, -2.0}, 0.7, 0);
    CHECK(a.n() == 80);
    CHECK(check_separable(a).separable);
    CHECK(a.X.data == b.X.data);
    CHECK(a.y == b.y);

    Dataset c = generate_blobs(40, 40, {2.0, 2.0}, {-2.0, -2.0}, 0.7, 1);
    CHECK(a.X.data != c.X.data);
}

TEST_CASE("zero spread returns the centers exactly") {
    Dataset ds = generate_blobs(1, 1, {2.0, 2.0}, {-2.0, -2.0}, 0.0, 0);
    CHECK(ds.X(0, 0) == 2.0);
    CHECK(ds.X(1, 1) == -2.0);
    CHECK(ds.y[0] == 1.0);
    CHECK(ds.y[1] == -1.0);
}

TEST_CASE("generation fails loudly on hopeless overlap") {
    CHECK_THROWS_AS(generate_blobs(30, 30, {0.0, 0.0}, {0.0, 0.0}, 1.0, 0), GenerationError);
}

TEST_CASE("csv round trip preserves the dataset") {
    Dataset ds = generate_blobs(5, 5, {2.0, 2.0}, {-2.0, -2.0}, 0.7, 11);
    auto path = (std::filesystem::temp_directory_path() / "mm_roundtrip.csv").string();
    ds.save_csv(path);
    Dataset back = Dataset::load_csv(path);
    CHECK(back.X.data == ds.X.data);
    CHECK(back.y == ds.y);
    std::remove(path.c_str());
    CHECK_THROWS_AS(Dataset::load_csv("/nonexistent/file.csv"), ContractViolation);
}
