#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tailpca/error.hpp"
#include "tailpca/simulate.hpp"
#include "tailpca/spectrum.hpp"

using namespace tailpca;

namespace {

AngularCovariance random_angular_covariance(Rng& rng, Index k, Index d) {
    Matrix raw(k, d);
    for (Index i = 0; i < k; ++i) {
        for (Index j = 0; j < d; ++j) raw(i, j) = rng.normal();
        raw.row(i) /= raw.row(i).norm();
    }
    std::vector<Index> indices(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) indices[static_cast<std::size_t>(i)] = i;
    return empirical_angular_covariance(AngularSample(raw, indices));
}

}  // namespace

TEST_CASE("diagonal spike example spectrum") {
    Matrix m = Matrix::Zero(4, 4);
    m.diagonal() << 9.0 / 18.0, 4.0 / 18.0, 4.0 / 18.0, 1.0 / 18.0;
    const auto spectrum = eigenvalues_descending(AngularCovariance(m, 100));
    CHECK(std::abs(spectrum[0] - 0.5) <= 1e-12);
    CHECK(std::abs(spectrum[1] - 2.0 / 9.0) <= 1e-12);
    CHECK(std::abs(spectrum[2] - 2.0 / 9.0) <= 1e-12);
    CHECK(std::abs(spectrum[3] - 1.0 / 18.0) <= 1e-12);
    CHECK(spectrum.d() == 4);
    CHECK(spectrum.k() == 100);
}

TEST_CASE("scaled identity spectrum") {
    const double s = 0.2;
    Matrix m = s * Matrix::Identity(4, 4);
    const auto spectrum = eigenvalues_descending(AngularCovariance(m, 10));
    for (Index i = 0; i < 4; ++i) CHECK(spectrum[i] == doctest::Approx(s).epsilon(1e-14));
}

TEST_CASE("eigenvalues match the characteristic polynomial oracle") {
    Rng rng(101);
    for (int trial = 0; trial < 5; ++trial) {
        const auto cov = random_angular_covariance(rng, 9, 4);
        const auto spectrum = eigenvalues_descending(cov);
        const auto roots = oracle::eigenvalues_bisection(cov.matrix());
        REQUIRE(roots.size() == 4);
        for (Index i = 0; i < 4; ++i) {
            CHECK(std::abs(spectrum[i] - roots[static_cast<std::size_t>(i)]) <= 1e-9);
        }
    }
}

TEST_CASE("eigenvalue sum equals the trace") {
    Rng rng(103);
    for (int trial = 0; trial < 5; ++trial) {
        const Index d = 3 + trial;
        const auto cov = random_angular_covariance(rng, 2 * d + 3, d);
        const auto spectrum = eigenvalues_descending(cov);
        CHECK(std::abs(spectrum.eigenvalues().sum() - cov.matrix().trace()) <=
              1e-9 * static_cast<double>(d));
    }
}

TEST_CASE("eigenvalues scale linearly with the matrix") {
    Rng rng(107);
    const auto cov = random_angular_covariance(rng, 12, 5);
    const auto base = eigenvalues_descending(cov);
    const double s = 0.5;
    const auto scaled = eigenvalues_descending(AngularCovariance(Matrix(s * cov.matrix()), 12));
    for (Index i = 0; i < 5; ++i) {
        if (base[i] > 0.0) {
            CHECK(scaled[i] / base[i] == doctest::Approx(s).epsilon(1e-12));
        }
    }
}

TEST_CASE("rank deficiency when k < d") {
    Rng rng(109);
    const Index k = 3;
    const Index d = 5;
    const auto cov = random_angular_covariance(rng, k, d);
    const auto spectrum = eigenvalues_descending(cov);
    // centering removes one dimension: exactly k-1 positive values remain
    for (Index i = 0; i < k - 1; ++i) CHECK(spectrum[i] > 1e-8);
    for (Index i = k - 1; i < d; ++i) CHECK(spectrum[i] <= 1e-8);
}

TEST_CASE("spectrum construction clamps tiny negatives and rejects real ones") {
    Vector nearly(3);
    nearly << 1e-3, 0.0, -5e-9;
    const Spectrum clamped(nearly, 3, 10);
    CHECK(clamped[2] == 0.0);

    Vector bad(3);
    bad << 1e-3, 0.0, -1e-6;
    CHECK_THROWS_AS(Spectrum(bad, 3, 10), Error);

    Vector unsorted(3);
    unsorted << 1.0, 2.0, 0.5;
    CHECK_THROWS_AS(Spectrum(unsorted, 3, 10), Error);
}

TEST_CASE("covariance with non-finite entries is rejected") {
    Matrix m = Matrix::Identity(3, 3) * 0.2;
    m(1, 1) = std::nan("");
    CHECK_THROWS_AS(AngularCovariance(m, 5), Error);
}

TEST_CASE("scree of a simple spectrum") {
    Vector values(3);
    values << 4.0, 2.0, 1.0;
    const Spectrum spectrum(values, 3, 10);
    const auto table = scree(spectrum, 3);
    REQUIRE(table.scaled.size() == 3);
    REQUIRE(table.increments.size() == 2);
    CHECK(table.scaled[0] == 1.0);
    CHECK(table.scaled[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(table.scaled[2] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(table.increments[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(table.increments[1] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("scree of flat and degenerate spectra") {
    Vector flat(3);
    flat << 2.0, 2.0, 2.0;
    const auto table = scree(Spectrum(flat, 3, 10), 3);
    CHECK(table.scaled == std::vector<double>{1.0, 1.0, 1.0});
    CHECK(table.increments == std::vector<double>{0.0, 0.0});

    Vector two(2);
    two << 1.0, 0.0;
    const auto pair = scree(Spectrum(two, 2, 10), 2);
    CHECK(pair.scaled == std::vector<double>{1.0, 0.0});
    CHECK(pair.increments == std::vector<double>{1.0});

    Vector zero(2);
    zero << 0.0, 0.0;
    CHECK_THROWS_WITH_AS(scree(Spectrum(zero, 2, 10), 2), "degenerate spectrum", Error);
    CHECK_THROWS_AS(scree(Spectrum(two, 2, 10), 3), Error);
}
