#include <cmath>
#include <random>

#include "doctest.h"
#include "mirror_margin/errors.hpp"
#include "mirror_margin/losses.hpp"

using namespace mirror_margin;

namespace {

Matrix rows_matrix(const std::vector<Vec>& rows) {
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.front().size(); ++j) m(i, j) = rows[i][j];
    return m;
}

}  // namespace

TEST_CASE("risk at reference points") {
    auto exp_loss = Loss::exponential();
    // three rows with Z beta = 0
    Matrix Z = rows_matrix({{1.0}, {2.0}, {-1.0}});
    CHECK(exp_loss.risk(Z, {0.0}).value == doctest::Approx(3.0));

    auto logi = Loss::logistic();
    Matrix Z1 = rows_matrix({{1.0}});
    CHECK(logi.risk(Z1, {0.0}).value == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    Matrix Z2 = rows_matrix({{1.0}, {2.0}});
    CHECK(exp_loss.risk(Z2, {1.0}).value ==
          doctest::Approx(std::exp(-1.0) + std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("risk gradient at reference points") {
    auto exp_loss = Loss::exponential();
    Matrix Z1 = rows_matrix({{1.0}});
    CHECK(exp_loss.risk_gradient(Z1, {0.0})[0] == doctest::Approx(-1.0));

    Matrix Z2 = rows_matrix({{1.0, 0.0}, {0.0, 1.0}});
    Vec g = exp_loss.risk_gradient(Z2, {0.0, 0.0});
    CHECK(g[0] == doctest::Approx(-1.0));
    CHECK(g[1] == doctest::Approx(-1.0));

    auto logi = Loss::logistic();
    CHECK(logi.risk_gradient(Z1, {0.0})[0] == doctest::Approx(-0.5));
}

TEST_CASE("q vector is a stable softmax for the exponential loss") {
    auto exp_loss = Loss::exponential();
    Matrix Z4 = rows_matrix({{1.0}, {2.0}, {-1.0}, {0.5}});
    Vec q = exp_loss.q_vector(Z4, {0.0});
    for (double qi : q) CHECK(qi == doctest::Approx(0.25).epsilon(1e-12));

    // Z beta = (0, ln 3) -> softmax(0, -ln 3) = (0.75, 0.25)
    Matrix Z2 = rows_matrix({{0.0, 1.0}, {std::log(3.0), 1.0}});
    Vec q2 = exp_loss.q_vector(Z2, {1.0, 0.0});
    CHECK(q2[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(q2[1] == doctest::Approx(0.25).epsilon(1e-12));

    Matrix Z1 = rows_matrix({{1.0}});
    CHECK(exp_loss.q_vector(Z1, {17.3})[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a scalar reference values") {
    auto exp_loss = Loss::exponential();
    Matrix Z2 = rows_matrix({{1.0}, {-1.0}});
    CHECK(exp_loss.a_scalar(Z2, {0.0}) == doctest::Approx(2.0));

    Matrix Z1 = rows_matrix({{1.0}});
    CHECK(exp_loss.a_scalar(Z1, {1.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    auto logi = Loss::logistic();
    CHECK(logi.a_scalar(Z1, {0.0}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("gradient matches finite differences of the risk") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    Matrix Z(6, 3);
    for (double& v : Z.data) v = coord(rng);
    const double h = 1e-6;
    for (auto loss : {Loss::exponential(), Loss::logistic()}) {
        for (int trial = 0; trial < 20; ++trial) {
            Vec beta = {coord(rng), coord(rng), coord(rng)};
            Vec g = loss.risk_gradient(Z, beta);
            for (std::size_t k = 0; k < 3; ++k) {
                Vec hi = beta, lo = beta;
                hi[k] += h;
                lo[k] -= h;
                double fd = (loss.risk(Z, hi).value - loss.risk(Z, lo).value) / (2.0 * h);
                CHECK(std::abs(fd - g[k]) <= 1e-5 * std::max(1.0, std::abs(g[k])));
            }
        }
    }
}

TEST_CASE("q entries live in (0,1] and exponential q sums to one") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    Matrix Z(5, 2);
    for (double& v : Z.data) v = coord(rng);
    for (auto loss : {Loss::exponential(), Loss::logistic()}) {
        for (int trial = 0; trial < 20; ++trial) {
            Vec beta = {coord(rng), coord(rng)};
            Vec q = loss.q_vector(Z, beta);
            double sum = 0.0;
            for (double qi : q) {
                CHECK(qi > 0.0);
                CHECK(qi <= 1.0 + 1e-12);
                sum += qi;
            }
            if (loss.kind() == LossKind::Exponential) CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("gradient decomposes as -a Z^T q") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    Matrix Z(7, 4);
    for (double& v : Z.data) v = coord(rng);
    for (auto loss : {Loss::exponential(), Loss::logistic()}) {
        for (int trial = 0; trial < 20; ++trial) {
            Vec beta(4);
            for (double& x : beta) x = coord(rng);
            Vec g = loss.risk_gradient(Z, beta);
            double a = loss.a_scalar(Z, beta);
            Vec rhs = (-a) * matvec_t(Z, loss.q_vector(Z, beta));
            for (std::size_t k = 0; k < 4; ++k)
                CHECK(std::abs(g[k] - rhs[k]) <= 1e-10 * std::max(1.0, std::abs(g[k])));
        }
    }
}

TEST_CASE("exponential tail holds at large margins") {
    for (auto loss : {Loss::exponential(), Loss::logistic()}) {
        for (double z : {10.0, 20.0, 30.0}) {
            double ez = std::exp(-z);
            CHECK(std::abs(loss.loss(z) / ez - 1.0) <= 1e-3);
            CHECK(std::abs(-loss.dloss(z) / ez - 1.0) <= 1e-3);
        }
    }
}

TEST_CASE("polynomial-tail custom losses are rejected") {
    CHECK_THROWS_AS(Loss::custom([](double z) { return 1.0 / (1.0 + z * z); },
                                 [](double z) {
                                     double d = 1.0 + z * z;
                                     return -2.0 * z / (d * d);
                                 },
                                 [](double y) { return std::sqrt(1.0 / y - 1.0); }),
                    ContractViolation);
    // a shifted exponential passes
    auto ok = Loss::custom([](double z) { return std::exp(-z); },
                           [](double z) { return -std::exp(-z); },
                           [](double y) { return -std::log(y); });
    CHECK(ok.loss(0.0) == doctest::Approx(1.0));
}

TEST_CASE("log-domain risk survives huge margins") {
    auto exp_loss = Loss::exponential();
    Matrix Z = rows_matrix({{1.0}, {2.0}});
    auto r = exp_loss.risk(Z, {5000.0});
    CHECK(r.value == 0.0);  // underflow-to-zero is the documented linear-domain behavior
    CHECK(r.log_value == doctest::Approx(-5000.0).epsilon(1e-12));
    Vec q = exp_loss.q_vector(Z, {5000.0});
    CHECK(q[0] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("dimension mismatch raises") {
    auto exp_loss = Loss::exponential();
    Matrix Z = rows_matrix({{1.0, 2.0}});
    CHECK_THROWS_AS(exp_loss.risk(Z, {1.0}), ContractViolation);
}
