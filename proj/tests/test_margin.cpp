#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "mirror_margin/data.hpp"
#include "mirror_margin/errors.hpp"
#include "mirror_margin/margin.hpp"

using namespace mirror_margin;

namespace {

Matrix rows(std::initializer_list<Vec> zs) {
    std::size_t n = zs.size(), d = zs.begin()->size();
    Matrix Z(n, d);
    std::size_t i = 0;
    for (const auto& z : zs) {
        for (std::size_t j = 0; j < d; ++j) Z(i, j) = z[j];
        ++i;
    }
    return Z;
}

// two +1 points; L1 and Linf genuinely disagree here
Matrix skewed() { return rows({{3.0, 1.0}, {1.0, 2.0}}); }

Matrix three_point() { return rows({{2.0, 0.0}, {0.0, 2.0}, {1.0, 1.0}}); }

}  // namespace

TEST_CASE("symmetric pair, l2: the axis solution") {
    Matrix Z = rows({{1.0, 0.0}, {1.0, 0.0}});
    auto sol = solve_max_margin({Gauge::l2(), Z});
    CHECK(sol.beta[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(sol.beta[1]) < 1e-8);
    CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(sol.kkt.pass(1e-8));
}

TEST_CASE("three point dataset, l2 vs the angular sweep oracle") {
    Matrix Z = three_point();
    auto sol = solve_max_margin({Gauge::l2(), Z});
    CHECK(sol.beta[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(sol.beta[1] == doctest::Approx(0.5).epsilon(1e-6));
    Vec oracle = angular_sweep_oracle(Gauge::l2(), Z, 2000);
    CHECK(cosine_similarity(sol.beta, oracle) >= 1.0 - 1e-4);
    CHECK(sol.kkt.pass(1e-8));
}

TEST_CASE("l1 and linf find different directions on skewed data") {
    Matrix Z = skewed();
    auto l1 = solve_max_margin({Gauge::l1(), Z});
    auto linf = solve_max_margin({Gauge::linf(), Z});

    // l1: vertex (0.2, 0.4); linf: (1/3, 1/3)
    CHECK(l1.beta[0] == doctest::Approx(0.2).epsilon(1e-8));
    CHECK(l1.beta[1] == doctest::Approx(0.4).epsilon(1e-8));
    CHECK(l1.objective == doctest::Approx(0.6).epsilon(1e-8));
    CHECK(linf.beta[0] == doctest::Approx(linf.beta[1]).epsilon(1e-8));
    CHECK(linf.objective == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
    CHECK(cosine_similarity(l1.beta, linf.beta) < 1.0 - 1e-3);

    Vec o1 = angular_sweep_oracle(Gauge::l1(), Z, 4000);
    Vec oinf = angular_sweep_oracle(Gauge::linf(), Z, 4000);
    CHECK(cosine_similarity(l1.beta, o1) >= 1.0 - 1e-3);
    CHECK(cosine_similarity(linf.beta, oinf) >= 1.0 - 1e-3);
    CHECK(l1.kkt.pass(1e-8));
    CHECK(linf.kkt.pass(1e-8));
}

TEST_CASE("lp and sampled gauges go through the cutting-plane path") {
    Matrix Z = skewed();
    auto lp = solve_max_margin({Gauge::lp(3.0), Z});
    CHECK(lp.kkt.pass(1e-4));
    Vec olp = angular_sweep_oracle(Gauge::lp(3.0), Z, 4000);
    CHECK(cosine_similarity(lp.beta, olp) >= 1.0 - 1e-3);

    // sampled square ~ linf ball
    std::vector<double> angles, radial;
    for (int k = 0; k < 720; ++k) {
        double theta = -M_PI + 2.0 * M_PI * k / 720.0;
        angles.push_back(theta);
        radial.push_back(1.0 / std::max(std::abs(std::cos(theta)), std::abs(std::sin(theta))));
    }
    Gauge square = Gauge::sampled2d(std::move(angles), std::move(radial));
    auto ssol = solve_max_margin({square, Z});
    auto lsol = solve_max_margin({Gauge::linf(), Z});
    CHECK(ssol.objective == doctest::Approx(lsol.objective).epsilon(1e-2));
    CHECK(ssol.kkt.pass(1e-3));
}

TEST_CASE("gauge scale does not move the argmin") {
    Matrix Z = three_point();
    auto a = solve_max_margin({Gauge::l2(), Z});
    auto b = solve_max_margin({Gauge::l2().scaled(7.5), Z});
    CHECK(norm2(a.beta - b.beta) < 1e-8);
    CHECK(b.objective == doctest::Approx(7.5 * a.objective).epsilon(1e-8));
}

TEST_CASE("row permutation preserves the optimum") {
    Matrix Z = three_point();
    Matrix P = rows({{1.0, 1.0}, {2.0, 0.0}, {0.0, 2.0}});
    auto a = solve_max_margin({Gauge::l1(), Z});
    auto b = solve_max_margin({Gauge::l1(), P});
    CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-10));
}

TEST_CASE("infeasible problems are refused") {
    Matrix Z = rows({{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}});
    CHECK_THROWS_AS(solve_max_margin({Gauge::l2(), Z}), ContractViolation);
    CHECK_THROWS_AS(angular_sweep_oracle(Gauge::l2(), Z, 720), ContractViolation);
}

TEST_CASE("oracle self-consistency under resolution doubling") {
    Matrix Z = three_point();
    Vec lo = angular_sweep_oracle(Gauge::l2(), Z, 1000);
    Vec hi = angular_sweep_oracle(Gauge::l2(), Z, 2000);
    CHECK(cosine_similarity(lo, hi) >= 1.0 - 1e-4);
    CHECK_THROWS_AS(angular_sweep_oracle(Gauge::l2(), rows({{1.0}}), 720), ContractViolation);
}

TEST_CASE("solver matches the oracle on random separable datasets") {
    std::vector<Gauge> gauges{Gauge::l1(), Gauge::l2(), Gauge::linf()};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Dataset ds = generate_blobs(10, 10, {2.0, 2.0}, {-2.0, -2.0}, 0.6, 100 + seed);
        for (const auto& g : gauges) {
            auto sol = solve_max_margin({g, ds.Z});
            Vec oracle = angular_sweep_oracle(g, ds.Z, 4000);
            CHECK(cosine_similarity(sol.beta, oracle) >= 1.0 - 1e-4);
        }
    }
}

TEST_CASE("kkt verification flags a non-optimal feasible point") {
    Matrix Z = three_point();
    auto sol = solve_max_margin({Gauge::l2(), Z});
    // feasible but deliberately misaligned direction, rescaled so min_i z_i beta = 1
    Vec scaled{0.5, 5.0};
    Vec margins = matvec(Z, scaled);
    double m = *std::min_element(margins.begin(), margins.end());
    Vec feas = (1.0 / m) * scaled;
    KktReport rep = kkt_verify(feas, sol.dual, Gauge::l2(), Z);
    CHECK_FALSE(rep.pass(1e-4));
}

TEST_CASE("directional gap endpoints") {
    Vec u{1.0, 0.0}, v{3.0, 0.0}, w{-2.0, 0.0};
    CHECK(directional_gap(u, v) == doctest::Approx(0.0));
    CHECK(directional_gap(u, w) == doctest::Approx(2.0));
    CHECK_THROWS_AS(directional_gap({0.0, 0.0}, u), std::invalid_argument);
}
