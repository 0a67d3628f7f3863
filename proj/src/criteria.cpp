#include "tailpca/criteria.hpp"

#include <cmath>

#include "tailpca/error.hpp"

namespace tailpca {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

void check_fixed_regime(const Spectrum& spectrum, Index k) {
    if (k <= spectrum.d()) throw_numeric("criterion regime mismatch");
}

void check_star_regime(const Spectrum& spectrum, Index k) {
    if (spectrum.d() <= k) throw_numeric("criterion regime mismatch");
}

// Eigenvalues 1..m must be strictly positive; p must lie in [1, m-1].
void check_range(const Spectrum& spectrum, Index m, Index p) {
    if (m < 2 || m > spectrum.size()) throw_invalid("criterion needs more eigenvalues");
    if (p < 1 || p > m - 1) throw_invalid("candidate dimension p out of range");
    for (Index i = 0; i < m; ++i) {
        if (spectrum[i] <= 0.0) throw_numeric("nonpositive eigenvalue in criterion range");
    }
}

// Sum of log of the leading p eigenvalues plus the pooled log term over
// eigenvalues p+1..m.
double likelihood_core(const Spectrum& spectrum, Index m, Index p) {
    double sum_log = 0.0;
    for (Index i = 0; i < p; ++i) sum_log += std::log(spectrum[i]);
    double tail_sum = 0.0;
    for (Index i = p; i < m; ++i) tail_sum += spectrum[i];
    const double tail_mean = tail_sum / static_cast<double>(m - p);
    return sum_log + static_cast<double>(m - p) * std::log(tail_mean);
}

// m * [log((count-1)/count) + log(2*pi) + 1]; count is k for the fixed/circ
// family and d for the star family.
double sample_constants(Index m, Index count) {
    const double c = static_cast<double>(count);
    return static_cast<double>(m) * (std::log((c - 1.0) / c) + kLog2Pi + 1.0);
}

}  // namespace

std::string_view to_string(CriterionKind kind) {
    switch (kind) {
        case CriterionKind::aic_fixed: return "aic";
        case CriterionKind::bic_fixed: return "bic";
        case CriterionKind::aic_circ: return "aic-circ";
        case CriterionKind::bic_circ: return "bic-circ";
        case CriterionKind::aic_star: return "aic-star";
        case CriterionKind::bic_star: return "bic-star";
    }
    return "unknown";
}

std::optional<CriterionKind> criterion_from_string(std::string_view name) {
    if (name == "aic") return CriterionKind::aic_fixed;
    if (name == "bic") return CriterionKind::bic_fixed;
    if (name == "aic-circ") return CriterionKind::aic_circ;
    if (name == "bic-circ") return CriterionKind::bic_circ;
    if (name == "aic-star") return CriterionKind::aic_star;
    if (name == "bic-star") return CriterionKind::bic_star;
    return std::nullopt;
}

bool is_star(CriterionKind kind) {
    return kind == CriterionKind::aic_star || kind == CriterionKind::bic_star;
}

double aic_fixed(const Spectrum& spectrum, Index k, Index p) {
    check_fixed_regime(spectrum, k);
    const Index m = spectrum.d() - 1;
    check_range(spectrum, m, p);
    const double kd = static_cast<double>(k);
    const double d = static_cast<double>(spectrum.d());
    const double pd = static_cast<double>(p);
    return kd * likelihood_core(spectrum, m, p) + kd * sample_constants(m, k) +
           2.0 * (pd + 1.0) * (d - pd / 2.0);
}

double bic_fixed(const Spectrum& spectrum, Index k, Index p) {
    check_fixed_regime(spectrum, k);
    const Index m = spectrum.d() - 1;
    check_range(spectrum, m, p);
    const double kd = static_cast<double>(k);
    const double d = static_cast<double>(spectrum.d());
    const double pd = static_cast<double>(p);
    return kd * likelihood_core(spectrum, m, p) + kd * sample_constants(m, k) +
           std::log(kd) * (pd + 1.0) * (d - pd / 2.0);
}

double aic_circ(const Spectrum& spectrum, Index k, Index p) {
    check_fixed_regime(spectrum, k);
    const Index m = spectrum.d() - 1;
    check_range(spectrum, m, p);
    const double kd = static_cast<double>(k);
    const double d = static_cast<double>(spectrum.d());
    const double pd = static_cast<double>(p);
    return likelihood_core(spectrum, m, p) + sample_constants(m, k) +
           (pd + 1.0) * (2.0 * d - pd) / kd;
}

double bic_circ(const Spectrum& spectrum, Index k, Index p) {
    check_fixed_regime(spectrum, k);
    const Index m = spectrum.d() - 1;
    check_range(spectrum, m, p);
    const double kd = static_cast<double>(k);
    const double d = static_cast<double>(spectrum.d());
    const double pd = static_cast<double>(p);
    return likelihood_core(spectrum, m, p) + sample_constants(m, k) +
           std::log(kd) * (pd + 1.0) * (d - pd / 2.0) / kd;
}

double aic_star(const Spectrum& spectrum, Index k, Index p) {
    check_star_regime(spectrum, k);
    const Index m = k - 1;
    check_range(spectrum, m, p);
    const double kd = static_cast<double>(k);
    const double d = static_cast<double>(spectrum.d());
    const double pd = static_cast<double>(p);
    return likelihood_core(spectrum, m, p) + sample_constants(m, spectrum.d()) +
           (pd + 1.0) * (2.0 * kd - pd) / d;
}

double bic_star(const Spectrum& spectrum, Index k, Index p) {
    check_star_regime(spectrum, k);
    const Index m = k - 1;
    check_range(spectrum, m, p);
    const double kd = static_cast<double>(k);
    const double d = static_cast<double>(spectrum.d());
    const double pd = static_cast<double>(p);
    return likelihood_core(spectrum, m, p) + sample_constants(m, spectrum.d()) +
           std::log(d) * (pd + 1.0) * (kd - pd / 2.0) / d;
}

double criterion_value(CriterionKind kind, const Spectrum& spectrum, Index k, Index p) {
    switch (kind) {
        case CriterionKind::aic_fixed: return aic_fixed(spectrum, k, p);
        case CriterionKind::bic_fixed: return bic_fixed(spectrum, k, p);
        case CriterionKind::aic_circ: return aic_circ(spectrum, k, p);
        case CriterionKind::bic_circ: return bic_circ(spectrum, k, p);
        case CriterionKind::aic_star: return aic_star(spectrum, k, p);
        case CriterionKind::bic_star: return bic_star(spectrum, k, p);
    }
    throw_invalid("unknown criterion kind");
}

Index max_candidate(CriterionKind kind, Index d, Index k) {
    return is_star(kind) ? k - 2 : d - 2;
}

namespace detail {

std::size_t smallest_argmin(const std::vector<double>& values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] < values[best]) best = i;
    }
    return best;
}

}  // namespace detail

CriterionCurve estimate_p(const Spectrum& spectrum, Index k, CriterionKind kind, Index q) {
    if (is_star(kind)) {
        check_star_regime(spectrum, k);
    } else {
        check_fixed_regime(spectrum, k);
    }
    const Index limit = max_candidate(kind, spectrum.d(), k);
    if (q < 1 || q > limit) throw_invalid("candidate bound q out of range for criterion");

    CriterionCurve curve;
    curve.kind = kind;
    curve.k = k;
    curve.d = spectrum.d();
    curve.q = q;
    curve.values.reserve(static_cast<std::size_t>(q));
    for (Index p = 1; p <= q; ++p) {
        curve.values.push_back(criterion_value(kind, spectrum, k, p));
    }
    curve.p_hat = static_cast<Index>(detail::smallest_argmin(curve.values)) + 1;
    return curve;
}

RegimePair select_regime(Index d, Index k) {
    if (d < 3 || k < 3) throw_invalid("regime selection needs d >= 3 and k >= 3");
    if (d == k) throw_numeric("c = 1 excluded");
    if (k > d) return RegimePair{CriterionKind::aic_fixed, CriterionKind::bic_fixed};
    return RegimePair{CriterionKind::aic_star, CriterionKind::bic_star};
}

Index default_q(Index d, Index k) {
    const RegimePair pair = select_regime(d, k);
    if (is_star(pair.aic)) return std::min<Index>(k - 2, (d + 1) / 2);
    return d - 2;
}

}  // namespace tailpca
