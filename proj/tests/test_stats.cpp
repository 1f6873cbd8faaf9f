#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "imgcx/errors.hpp"
#include "imgcx/stats.hpp"

using namespace imgcx;
using namespace imgcx::stats;

namespace {

// Two-tailed t tail by Simpson integration of the Student density.
double t_tail_oracle(double t, double df) {
    const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * std::numbers::pi);
    auto f = [&](double x) { return c * std::pow(1 + x * x / df, -(df + 1) / 2); };
    const int n = 200000;
    const double h = t / n;
    double s = f(0) + f(t);
    for (int i = 1; i < n; ++i) s += f(i * h) * (i % 2 ? 4 : 2);
    return 1.0 - 2.0 * s * h / 3.0;
}

}  // namespace

TEST_CASE("pearson fixtures") {
    const std::vector<double> a = {1, 2, 3}, b = {6, 4, 2};
    CHECK(pearson(a, a) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pearson(a, b) == doctest::Approx(-1.0).epsilon(1e-15));
    const std::vector<double> c = {1, 2, 3, 4}, d = {1, 2, 4, 3};
    CHECK(pearson(c, d) == doctest::Approx(0.8).epsilon(1e-14));

    CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), InvalidInput);
    CHECK_THROWS_AS(pearson(a, std::vector<double>{1, 2}), InvalidInput);
    CHECK_THROWS_AS(pearson(a, std::vector<double>{5, 5, 5}), UndefinedValue);
}

TEST_CASE("pearson is stable under large offsets") {
    std::vector<double> x, y;
    for (int i = 0; i < 100; ++i) {
        x.push_back(1e9 + i);
        y.push_back(1e9 + (i % 7));
    }
    std::vector<double> x0, y0;
    for (int i = 0; i < 100; ++i) {
        x0.push_back(i);
        y0.push_back(i % 7);
    }
    CHECK(pearson(x, y) == doctest::Approx(pearson(x0, y0)).epsilon(1e-9));
}

TEST_CASE("pearson properties") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 3 + rng() % 60;
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = g(rng);
            y[i] = 0.5 * x[i] + g(rng);
        }
        const double r = pearson(x, y);
        CHECK(std::abs(r) <= 1.0);
        CHECK(pearson(y, x) == doctest::Approx(r).epsilon(1e-14));

        std::vector<double> ax(n), ay(n);
        for (std::size_t i = 0; i < n; ++i) {
            ax[i] = 3.5 * x[i] - 2.0;
            ay[i] = -0.25 * y[i] + 7.0;
        }
        CHECK(pearson(ax, ay) == doctest::Approx(-r).epsilon(1e-12));
    }
}

TEST_CASE("p-values") {
    CHECK(p_value(0.0, 10) == 1.0);
    CHECK(p_value(1.0, 10) == 0.0);
    CHECK(p_value(-1.0, 10) == 0.0);

    const double t = 0.5 * std::sqrt(8.0 / 0.75);
    CHECK(p_value(0.5, 10) == doctest::Approx(t_tail_oracle(t, 8.0)).epsilon(1e-8));
    CHECK(p_value(0.5, 10) == doctest::Approx(0.141).epsilon(0.01));
    CHECK(p_value(-0.5, 10) == p_value(0.5, 10));
    CHECK(p_value(0.873, 1774) < 1e-3);
    CHECK(p_value(0.05, 30) == doctest::Approx(t_tail_oracle(0.05 * std::sqrt(28.0 / (1 - 0.0025)), 28.0)).epsilon(1e-8));

    double prev = 1.0;
    for (double r = 0.01; r < 1.0; r += 0.01) {
        const double p = p_value(r, 25);
        CHECK(p <= prev);
        CHECK(p >= 0.0);
        prev = p;
    }
    CHECK_THROWS_AS(p_value(0.5, 2), InvalidInput);
}

TEST_CASE("correlation matrix") {
    const std::vector<std::string> names = {"a", "b", "c", "k"};
    std::vector<Column> cols(4);
    for (int i = 0; i < 10; ++i) {
        cols[0].push_back(i);
        cols[1].push_back(i * i);
        cols[2].push_back(i % 3 == 0 ? std::nullopt : std::optional<double>(10 - i));
        cols[3].push_back(4.0);
    }
    const auto m = correlation_matrix(names, cols);
    CHECK(m.size() == 4);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(*m.r_at(i, i) == 1.0);
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(m.r_at(i, j) == m.r_at(j, i));
            CHECK(m.n_at(i, j) == m.n_at(j, i));
        }
    }
    CHECK(m.n_at(0, 2) == 6);
    CHECK(*m.r_at(0, 2) == doctest::Approx(-1.0));
    CHECK(m.n_at(0, 1) == 10);
    CHECK_FALSE(m.r_at(3, 3).has_value());
    CHECK_FALSE(m.r_at(0, 3).has_value());
    CHECK(*m.index_of("c") == 2);
    CHECK_FALSE(m.index_of("z").has_value());

    // Permuting the variables permutes the matrix.
    const auto swapped = correlation_matrix({"c", "a", "b", "k"}, {cols[2], cols[0], cols[1], cols[3]});
    CHECK(swapped.r_at(1, 2) == m.r_at(0, 1));
    CHECK(swapped.r_at(0, 1) == m.r_at(2, 0));

    const auto csv = to_csv(m);
    CHECK(csv.find("NA") != std::string::npos);
    CHECK(csv.find("1.000000") != std::string::npos);
    const auto json = to_json(m);
    CHECK(json.find("\"names\"") != std::string::npos);
    CHECK(json.find("null") != std::string::npos);

    CHECK_THROWS_AS(correlation_matrix({"a"}, {}), InvalidInput);
}
