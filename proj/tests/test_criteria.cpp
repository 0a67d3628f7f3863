#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tailpca/criteria.hpp"
#include "tailpca/error.hpp"
#include "tailpca/simulate.hpp"

using namespace tailpca;

namespace {

Spectrum flat_spectrum(Index d, Index k, double value) {
    Vector v = Vector::Constant(d, value);
    return Spectrum(v, d, k);
}

}  // namespace

TEST_CASE("criterion labels round-trip") {
    for (const auto kind :
         {CriterionKind::aic_fixed, CriterionKind::bic_fixed, CriterionKind::aic_circ,
          CriterionKind::bic_circ, CriterionKind::aic_star, CriterionKind::bic_star}) {
        const auto name = to_string(kind);
        REQUIRE(criterion_from_string(name).has_value());
        CHECK(*criterion_from_string(name) == kind);
    }
    CHECK(!criterion_from_string("nope").has_value());
}

TEST_CASE("fixed-dimension criteria match the literal oracle") {
    const std::vector<double> values = {8.0, 1.0, 1.0, 1.0, 0.5};
    const auto spectrum = oracle::make_spectrum(values, 5, 50);
    for (Index p = 1; p <= 3; ++p) {
        const double expect_aic = oracle::aic_fixed(values, 5, 50, p);
        const double expect_bic = oracle::bic_fixed(values, 5, 50, p);
        CHECK(aic_fixed(spectrum, 50, p) ==
              doctest::Approx(expect_aic).epsilon(1e-9));
        CHECK(bic_fixed(spectrum, 50, p) ==
              doctest::Approx(expect_bic).epsilon(1e-9));
    }
}

TEST_CASE("star criteria match the literal oracle") {
    Rng rng(71);
    const Index d = 30;
    const Index k = 10;
    std::vector<double> values = oracle::random_descending(rng, k - 1);
    values.resize(static_cast<std::size_t>(d), 0.0);
    const auto spectrum = oracle::make_spectrum(values, d, k);
    for (Index p = 1; p <= k - 2; ++p) {
        CHECK(aic_star(spectrum, k, p) ==
              doctest::Approx(oracle::aic_star(values, d, k, p)).epsilon(1e-9));
        CHECK(bic_star(spectrum, k, p) ==
              doctest::Approx(oracle::bic_star(values, d, k, p)).epsilon(1e-9));
    }
}

TEST_CASE("penalty difference identity from the 4-dimensional example") {
    // 2(p+1)(d - p/2) at d = 4: p = 1 gives 14, p = 2 gives 18
    const auto penalty = [](Index d, Index p) {
        return 2.0 * (p + 1.0) * (static_cast<double>(d) - p / 2.0);
    };
    CHECK(penalty(4, 1) - penalty(4, 2) == -4.0);
    // (d-p*-2)(d-p*+1) - (d-p-2)(d-p+1) = 4 for p* = 1, p = 2, d = 4
    const auto bracket = [](Index d, Index p) {
        return (static_cast<double>(d) - p - 2.0) * (static_cast<double>(d) - p + 1.0);
    };
    CHECK(bracket(4, 1) - bracket(4, 2) == 4.0);
    // 2(p+1)(d - p/2) - (d-1)(d+2) = -(d-p-2)(d-p+1) for all integer p
    for (Index d = 4; d <= 30; ++d) {
        for (Index p = 1; p <= d - 2; ++p) {
            const double lhs =
                penalty(d, p) - (static_cast<double>(d) - 1.0) * (static_cast<double>(d) + 2.0);
            CHECK(lhs == -bracket(d, p));
        }
    }
}

TEST_CASE("flat spectrum puts every argmin at 1") {
    const auto fixed = flat_spectrum(8, 30, 0.1);
    const auto star = flat_spectrum(30, 8, 0.02);
    for (const auto kind : {CriterionKind::aic_fixed, CriterionKind::bic_fixed,
                            CriterionKind::aic_circ, CriterionKind::bic_circ}) {
        CHECK(estimate_p(fixed, 30, kind, 6).p_hat == 1);
    }
    for (const auto kind : {CriterionKind::aic_star, CriterionKind::bic_star}) {
        CHECK(estimate_p(star, 8, kind, 6).p_hat == 1);
    }
}

TEST_CASE("bic minus aic identity") {
    Rng rng(73);
    const Index d = 9;
    const Index k = 120;
    const auto values = oracle::random_descending(rng, d);
    const auto spectrum = oracle::make_spectrum(values, d, k);
    for (Index p = 1; p <= d - 2; ++p) {
        const double expected =
            (std::log(static_cast<double>(k)) - 2.0) * (p + 1.0) *
            (static_cast<double>(d) - p / 2.0);
        CHECK(bic_fixed(spectrum, k, p) - aic_fixed(spectrum, k, p) ==
              doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("bic crosses aic where log k passes 2") {
    const std::vector<double> values = {2.0, 1.0, 0.7, 0.4};
    const auto spectrum = oracle::make_spectrum(values, 4, 7);
    // log 7 < 2 < log 8
    CHECK(bic_fixed(spectrum, 7, 1) < aic_fixed(spectrum, 7, 1));
    const auto spectrum8 = oracle::make_spectrum(values, 4, 8);
    CHECK(bic_fixed(spectrum8, 8, 1) > aic_fixed(spectrum8, 8, 1));
}

TEST_CASE("rescaled criteria are exact multiples of the fixed ones") {
    Rng rng(79);
    for (int trial = 0; trial < 10; ++trial) {
        const Index d = 5 + static_cast<Index>(std::floor(10.0 * rng.uniform()));
        const Index k = d + 5 + static_cast<Index>(std::floor(500.0 * rng.uniform()));
        const auto values = oracle::random_descending(rng, d);
        const auto spectrum = oracle::make_spectrum(values, d, k);
        for (Index p = 1; p <= d - 2; ++p) {
            const double kk = static_cast<double>(k);
            CHECK(kk * aic_circ(spectrum, k, p) ==
                  doctest::Approx(aic_fixed(spectrum, k, p)).epsilon(1e-9));
            CHECK(kk * bic_circ(spectrum, k, p) ==
                  doctest::Approx(bic_fixed(spectrum, k, p)).epsilon(1e-9));
        }
        const auto aic_curve = estimate_p(spectrum, k, CriterionKind::aic_fixed, d - 2);
        const auto circ_curve = estimate_p(spectrum, k, CriterionKind::aic_circ, d - 2);
        CHECK(aic_curve.p_hat == circ_curve.p_hat);
    }
}

TEST_CASE("star criterion difference identity") {
    Rng rng(83);
    const Index d = 40;
    const Index k = 12;
    std::vector<double> values = oracle::random_descending(rng, k - 1);
    values.resize(static_cast<std::size_t>(d), 0.0);
    const auto spectrum = oracle::make_spectrum(values, d, k);
    for (Index p = 1; p <= k - 2; ++p) {
        const double dd = static_cast<double>(d);
        const double expected = std::log(dd) * (p + 1.0) * (static_cast<double>(k) - p / 2.0) -
                                (p + 1.0) * (2.0 * static_cast<double>(k) - p);
        CHECK(dd * (bic_star(spectrum, k, p) - aic_star(spectrum, k, p)) ==
              doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("estimate_p basics") {
    const auto spectrum = flat_spectrum(10, 40, 0.05);
    CHECK(estimate_p(spectrum, 40, CriterionKind::aic_fixed, 1).p_hat == 1);
    const auto curve = estimate_p(spectrum, 40, CriterionKind::bic_fixed, 8);
    CHECK(curve.q == 8);
    CHECK(curve.values.size() == 8);
    CHECK(curve.d == 10);
    CHECK(curve.k == 40);
    for (const double v : curve.values) CHECK(std::isfinite(v));
}

TEST_CASE("estimate_p rejects regime mismatches and bad q") {
    const auto fixed = flat_spectrum(10, 40, 0.05);
    CHECK_THROWS_WITH_AS(estimate_p(fixed, 40, CriterionKind::aic_star, 4),
                         "criterion regime mismatch", Error);
    const auto star = flat_spectrum(40, 10, 0.02);
    CHECK_THROWS_WITH_AS(estimate_p(star, 10, CriterionKind::aic_fixed, 4),
                         "criterion regime mismatch", Error);
    CHECK_THROWS_AS(estimate_p(fixed, 40, CriterionKind::aic_fixed, 9), Error);
    CHECK_THROWS_AS(estimate_p(fixed, 40, CriterionKind::aic_fixed, 0), Error);
}

TEST_CASE("nonpositive eigenvalues in range are rejected") {
    Vector values(4);
    values << 1.0, 0.5, 0.0, 0.0;
    const Spectrum fixed(values, 4, 10);
    CHECK_THROWS_WITH_AS(aic_fixed(fixed, 10, 1), "nonpositive eigenvalue in criterion range",
                         Error);
    // star range only needs the first k-1 = 2 eigenvalues
    const Spectrum star(values, 4, 3);
    CHECK_NOTHROW(aic_star(star, 3, 1));
}

TEST_CASE("argmin ties resolve to the smallest p") {
    CHECK(detail::smallest_argmin({2.0, 1.0, 1.0, 3.0}) == 1);
    CHECK(detail::smallest_argmin({1.0, 1.0}) == 0);
    CHECK(detail::smallest_argmin({5.0}) == 0);
}

TEST_CASE("scale invariance of the argmin") {
    Rng rng(89);
    for (int trial = 0; trial < 10; ++trial) {
        const Index d = 6 + static_cast<Index>(std::floor(8.0 * rng.uniform()));
        const Index k = d + 10 + static_cast<Index>(std::floor(300.0 * rng.uniform()));
        const auto values = oracle::random_descending(rng, d);
        const auto spectrum = oracle::make_spectrum(values, d, k);
        for (const double s : {1e-6, 1e6}) {
            std::vector<double> scaled_values(values);
            for (auto& v : scaled_values) v *= s;
            const auto scaled = oracle::make_spectrum(scaled_values, d, k);
            for (const auto kind : {CriterionKind::aic_fixed, CriterionKind::bic_fixed,
                                    CriterionKind::aic_circ, CriterionKind::bic_circ}) {
                const auto base_curve = estimate_p(spectrum, k, kind, d - 2);
                const auto scaled_curve = estimate_p(scaled, k, kind, d - 2);
                CHECK(base_curve.p_hat == scaled_curve.p_hat);
                double min_diff = INFINITY;
                double max_diff = -INFINITY;
                for (Index p = 1; p <= d - 2; ++p) {
                    const double diff = scaled_curve.value_at(p) - base_curve.value_at(p);
                    min_diff = std::min(min_diff, diff);
                    max_diff = std::max(max_diff, diff);
                }
                CHECK(max_diff - min_diff <=
                      1e-9 * std::max(1.0, std::abs(max_diff)));
            }
        }
    }
}

TEST_CASE("regime selection") {
    const auto fixed = select_regime(20, 100);
    CHECK(fixed.aic == CriterionKind::aic_fixed);
    CHECK(fixed.bic == CriterionKind::bic_fixed);
    const auto star = select_regime(500, 76);
    CHECK(star.aic == CriterionKind::aic_star);
    CHECK(star.bic == CriterionKind::bic_star);
    CHECK_THROWS_WITH_AS(select_regime(50, 50), "c = 1 excluded", Error);
    CHECK_THROWS_AS(select_regime(2, 100), Error);
    CHECK_THROWS_AS(select_regime(100, 2), Error);
}

TEST_CASE("default candidate bounds") {
    CHECK(default_q(20, 100) == 18);
    CHECK(default_q(500, 76) == 74);     // k - 2 binds
    CHECK(default_q(500, 400) == 250);   // ceil(d/2) binds
    CHECK(default_q(501, 400) == 251);
    CHECK(default_q(30, 5) == 3);
}
