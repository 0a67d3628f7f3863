#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tailpca/angular.hpp"
#include "tailpca/error.hpp"
#include "tailpca/simulate.hpp"

using namespace tailpca;

namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const Index n = static_cast<Index>(rows.size());
    const Index d = static_cast<Index>(rows.begin()->size());
    Matrix m(n, d);
    Index i = 0;
    for (const auto& row : rows) {
        Index j = 0;
        for (const double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

}  // namespace

TEST_CASE("data matrix validation") {
    CHECK_THROWS_AS(DataMatrix{from_rows({{1.0}, {2.0}})}, Error);  // d = 1
    Matrix bad = from_rows({{1.0, 2.0}, {3.0, 4.0}});
    bad(1, 1) = std::nan("");
    CHECK_THROWS_AS(DataMatrix{bad}, Error);
    bad(1, 1) = INFINITY;
    CHECK_THROWS_AS(DataMatrix{bad}, Error);
    CHECK_NOTHROW(DataMatrix{from_rows({{1.0, 2.0}})});
}

TEST_CASE("frechet margin transform on a simple column") {
    const DataMatrix data(from_rows({{1.0, 5.0}, {2.0, 1.0}, {3.0, 9.0}}));
    const auto result = frechet_margin_transform(data);
    const auto& out = result.data.values();
    CHECK(out(0, 0) == doctest::Approx(0.7213).epsilon(1e-3));
    CHECK(out(1, 0) == doctest::Approx(1.4427).epsilon(1e-3));
    CHECK(out(2, 0) == doctest::Approx(3.4761).epsilon(1e-3));
    CHECK(out(0, 0) == doctest::Approx(-1.0 / std::log(0.25)).epsilon(1e-14));
    CHECK(result.constant_columns.empty());
}

TEST_CASE("frechet margin transform keeps strict monotonicity") {
    Rng rng(42);
    Matrix values(8, 2);
    double acc = 0.0;
    for (Index i = 0; i < 8; ++i) {
        acc += std::abs(rng.normal()) + 0.1;
        values(i, 0) = acc;
        values(i, 1) = rng.normal();
    }
    const auto result = frechet_margin_transform(DataMatrix(values));
    for (Index i = 0; i + 1 < 8; ++i) {
        CHECK(result.data.values()(i, 0) < result.data.values()(i + 1, 0));
    }
}

TEST_CASE("frechet margin transform averages tied ranks") {
    const DataMatrix data(from_rows({{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}, {3.0, 0.0}}));
    const auto result = frechet_margin_transform(data);
    const auto& out = result.data.values();
    CHECK(out(2, 0) == out(3, 0));
    CHECK(out(2, 0) == doctest::Approx(-1.0 / std::log(3.5 / 5.0)).epsilon(1e-14));
    // column 1 is constant: all ranks tied, output defined and flagged
    REQUIRE(result.constant_columns.size() == 1);
    CHECK(result.constant_columns[0] == 1);
    CHECK(out(0, 1) == out(3, 1));
    CHECK(std::isfinite(out(0, 1)));
}

TEST_CASE("frechet margin transform matches the counting rank oracle") {
    Rng rng(7);
    Matrix values(12, 3);
    for (Index i = 0; i < values.rows(); ++i) {
        for (Index j = 0; j < values.cols(); ++j) {
            values(i, j) = std::floor(3.0 * rng.uniform());  // plenty of ties
        }
    }
    const DataMatrix data(values);
    const auto result = frechet_margin_transform(data);
    for (Index j = 0; j < values.cols(); ++j) {
        std::vector<double> column(static_cast<std::size_t>(values.rows()));
        for (Index i = 0; i < values.rows(); ++i) column[static_cast<std::size_t>(i)] = values(i, j);
        const auto ranks = oracle::average_ranks(column);
        for (Index i = 0; i < values.rows(); ++i) {
            const double expected =
                -1.0 / std::log(ranks[static_cast<std::size_t>(i)] /
                                static_cast<double>(values.rows() + 1));
            CHECK(result.data.values()(i, j) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("frechet margin transform is rank-invariant") {
    Rng rng(11);
    Matrix values(20, 2);
    for (Index i = 0; i < 20; ++i) {
        values(i, 0) = rng.normal();
        values(i, 1) = rng.normal();
    }
    const auto base = frechet_margin_transform(DataMatrix(values));
    Matrix warped = values;
    for (Index i = 0; i < 20; ++i) {
        warped(i, 0) = std::exp(values(i, 0));           // strictly increasing
        warped(i, 1) = values(i, 1) * values(i, 1) * values(i, 1);
    }
    const auto transformed = frechet_margin_transform(DataMatrix(warped));
    CHECK((base.data.values() - transformed.data.values()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("frechet margin transform needs two rows") {
    CHECK_THROWS_AS(frechet_margin_transform(DataMatrix(from_rows({{1.0, 2.0}}))), Error);
}

TEST_CASE("select extremes picks the largest norms") {
    const DataMatrix data(from_rows({{3.0, 4.0}, {1.0, 0.0}, {0.0, 1.0}}));
    const auto sample = select_extremes(data, 1);
    REQUIRE(sample.k() == 1);
    CHECK(sample.directions()(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(sample.directions()(0, 1) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(sample.source_indices()[0] == 0);
}

TEST_CASE("select extremes with k = n-1 drops the smallest norm") {
    Rng rng(3);
    Matrix values(6, 3);
    for (Index i = 0; i < 6; ++i) {
        for (Index j = 0; j < 3; ++j) values(i, j) = rng.normal() + 2.0 * (i + 1);
    }
    const DataMatrix data(values);
    Index argmin = 0;
    double best = values.row(0).norm();
    for (Index i = 1; i < 6; ++i) {
        if (values.row(i).norm() < best) {
            best = values.row(i).norm();
            argmin = i;
        }
    }
    const auto sample = select_extremes(data, 5);
    for (const Index idx : sample.source_indices()) CHECK(idx != argmin);
}

TEST_CASE("select extremes breaks norm ties by lower row index") {
    const DataMatrix data(from_rows({{0.0, 5.0}, {5.0, 0.0}, {1.0, 1.0}}));
    const auto sample = select_extremes(data, 1);
    CHECK(sample.source_indices()[0] == 0);
}

TEST_CASE("select extremes matches the pairwise dominance oracle under ties") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix values(9, 2);
        for (Index i = 0; i < 9; ++i) {
            const double norm = 1.0 + std::floor(3.0 * rng.uniform());  // tied norms
            const double angle = rng.uniform();
            values(i, 0) = norm * std::cos(angle);
            values(i, 1) = norm * std::sin(angle);
        }
        const DataMatrix data(values);
        const Index k = 1 + static_cast<Index>(std::floor(7.9 * rng.uniform()));
        const auto sample = select_extremes(data, k);
        std::vector<bool> selected(9, false);
        for (const Index idx : sample.source_indices()) selected[static_cast<std::size_t>(idx)] = true;
        for (Index i = 0; i < 9; ++i) {
            if (!selected[static_cast<std::size_t>(i)]) continue;
            for (Index j = 0; j < 9; ++j) {
                if (selected[static_cast<std::size_t>(j)]) continue;
                const double ni = values.row(i).norm();
                const double nj = values.row(j).norm();
                const bool dominated = (nj < ni) || (nj == ni && j > i);
                CHECK(dominated);
            }
        }
    }
}

TEST_CASE("select extremes errors") {
    const DataMatrix data(from_rows({{1.0, 0.0}, {0.0, 2.0}}));
    CHECK_THROWS_WITH_AS(select_extremes(data, 2), "k must be < n", Error);
    CHECK_THROWS_AS(select_extremes(data, 0), Error);
    const DataMatrix zero(from_rows({{0.0, 0.0}, {0.0, 0.0}}));
    CHECK_THROWS_WITH_AS(select_extremes(zero, 1), "zero-norm extreme", Error);
}

TEST_CASE("select extremes is invariant under positive rescaling") {
    Rng rng(23);
    Matrix values(10, 4);
    for (Index i = 0; i < 10; ++i) {
        for (Index j = 0; j < 4; ++j) values(i, j) = rng.normal();
    }
    const auto base = select_extremes(DataMatrix(values), 4);
    const auto scaled = select_extremes(DataMatrix(Matrix(3.7 * values)), 4);
    CHECK(base.source_indices() == scaled.source_indices());
}

TEST_CASE("empirical mean direction") {
    {
        Matrix directions = from_rows({{0.0, 1.0}});
        const AngularSample sample(directions, {0});
        const Vector mean = empirical_mean_direction(sample);
        CHECK(mean[0] == 0.0);
        CHECK(mean[1] == 1.0);
    }
    {
        Matrix directions = from_rows({{1.0, 0.0}, {-1.0, 0.0}});
        const AngularSample sample(directions, {0, 1});
        CHECK(empirical_mean_direction(sample).norm() == 0.0);
    }
    {
        Matrix directions = from_rows({{1.0, 0.0}, {0.0, 1.0}});
        const AngularSample sample(directions, {0, 1});
        const Vector mean = empirical_mean_direction(sample);
        CHECK(mean[0] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(mean[1] == doctest::Approx(0.5).epsilon(1e-15));
    }
}

TEST_CASE("angular covariance of opposite directions") {
    Matrix directions = from_rows({{1.0, 0.0}, {-1.0, 0.0}});
    const auto cov = empirical_angular_covariance(AngularSample(directions, {0, 1}));
    CHECK(cov.matrix()(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cov.matrix()(0, 1) == 0.0);
    CHECK(cov.matrix()(1, 1) == 0.0);
}

TEST_CASE("angular covariance of identical directions is zero") {
    Matrix directions(4, 3);
    const Vector dir = Vector::Ones(3) / std::sqrt(3.0);
    for (Index i = 0; i < 4; ++i) directions.row(i) = dir.transpose();
    const auto cov = empirical_angular_covariance(AngularSample(directions, {0, 1, 2, 3}));
    CHECK(cov.matrix().cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("angular covariance matches the brute-force oracle") {
    Rng rng(31);
    Matrix raw(5, 3);
    for (Index i = 0; i < 5; ++i) {
        for (Index j = 0; j < 3; ++j) raw(i, j) = rng.normal();
        raw.row(i) /= raw.row(i).norm();
    }
    const AngularSample sample(raw, {0, 1, 2, 3, 4});
    const auto cov = empirical_angular_covariance(sample);
    const Matrix expected = oracle::covariance_bruteforce(raw);
    CHECK((cov.matrix() - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("angular covariance ignores row order") {
    Rng rng(37);
    Matrix raw(7, 4);
    for (Index i = 0; i < 7; ++i) {
        for (Index j = 0; j < 4; ++j) raw(i, j) = rng.normal();
        raw.row(i) /= raw.row(i).norm();
    }
    Matrix permuted(7, 4);
    const std::vector<Index> perm = {3, 0, 6, 1, 5, 2, 4};
    for (Index i = 0; i < 7; ++i) permuted.row(i) = raw.row(perm[static_cast<std::size_t>(i)]);
    const auto a = empirical_angular_covariance(AngularSample(raw, {0, 1, 2, 3, 4, 5, 6}));
    const auto b = empirical_angular_covariance(AngularSample(permuted, {0, 1, 2, 3, 4, 5, 6}));
    CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("angular covariance trace stays at or below one") {
    Rng rng(41);
    Matrix raw(16, 5);
    for (Index i = 0; i < 8; ++i) {
        for (Index j = 0; j < 5; ++j) raw(i, j) = rng.normal();
        raw.row(i) /= raw.row(i).norm();
        raw.row(8 + i) = -raw.row(i);  // symmetric pair, mean direction zero
    }
    std::vector<Index> indices(16);
    for (Index i = 0; i < 16; ++i) indices[static_cast<std::size_t>(i)] = i;
    const auto cov = empirical_angular_covariance(AngularSample(raw, indices));
    CHECK(cov.matrix().trace() == doctest::Approx(1.0).epsilon(1e-12));

    Matrix head = raw.topRows(5);
    const auto partial =
        empirical_angular_covariance(AngularSample(head, {0, 1, 2, 3, 4}));
    CHECK(partial.matrix().trace() <= 1.0 + 1e-12);
}

TEST_CASE("angular covariance requires at least two extremes") {
    Matrix directions = from_rows({{1.0, 0.0}});
    CHECK_THROWS_WITH_AS(empirical_angular_covariance(AngularSample(directions, {0})),
                         "need at least two extremes", Error);
}

TEST_CASE("angular sample validation") {
    Matrix not_unit = from_rows({{1.0, 1.0}});
    CHECK_THROWS_AS(AngularSample(not_unit, {0}), Error);
    Matrix ok = from_rows({{1.0, 0.0}, {0.0, 1.0}});
    CHECK_THROWS_AS(AngularSample(ok, {2, 2}), Error);
}
