#ifndef TAILPCA_CRITERIA_HPP
#define TAILPCA_CRITERIA_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "tailpca/spectrum.hpp"

namespace tailpca {

/// The six information criteria. The fixed and circ variants apply when
/// k > d, the star variants when d > k; d = k is rejected everywhere.
enum class CriterionKind {
    aic_fixed,
    bic_fixed,
    aic_circ,
    bic_circ,
    aic_star,
    bic_star,
};

std::string_view to_string(CriterionKind kind);
std::optional<CriterionKind> criterion_from_string(std::string_view name);

/// True for the star variants (d > k regime).
bool is_star(CriterionKind kind);

/// Criterion values at candidate dimension p. Common shape:
/// spike log-likelihood over the leading p eigenvalues, a pooled tail term,
/// constants, and a parameter-count penalty. The fixed variants use the
/// first d-1 eigenvalues (the smallest is dropped), the star variants the
/// first k-1. Preconditions: regime compatibility, 1 <= p <= d-2 (fixed/circ)
/// or k-2 (star), and strictly positive eigenvalues in the used range.
double aic_fixed(const Spectrum& spectrum, Index k, Index p);
double bic_fixed(const Spectrum& spectrum, Index k, Index p);
double aic_circ(const Spectrum& spectrum, Index k, Index p);
double bic_circ(const Spectrum& spectrum, Index k, Index p);
double aic_star(const Spectrum& spectrum, Index k, Index p);
double bic_star(const Spectrum& spectrum, Index k, Index p);

double criterion_value(CriterionKind kind, const Spectrum& spectrum, Index k, Index p);

/// One criterion evaluated over p = 1..q with its minimizer.
struct CriterionCurve {
    CriterionKind kind;
    Index k = 0;
    Index d = 0;
    Index q = 0;
    std::vector<double> values;  ///< values[p-1] is the criterion at p
    Index p_hat = 0;             ///< smallest argmin over 1..q

    double value_at(Index p) const { return values[static_cast<std::size_t>(p - 1)]; }
};

/// Evaluates `kind` for p = 1..q and returns the full curve plus the
/// smallest argmin. Errors on regime mismatch and out-of-range q.
CriterionCurve estimate_p(const Spectrum& spectrum, Index k, CriterionKind kind, Index q);

/// Largest admissible candidate dimension for the kind: d-2 or k-2.
Index max_candidate(CriterionKind kind, Index d, Index k);

struct RegimePair {
    CriterionKind aic;
    CriterionKind bic;
};

/// k > d selects the fixed-dimension pair, d > k the star pair;
/// d = k is rejected. Requires d >= 3 and k >= 3.
RegimePair select_regime(Index d, Index k);

/// Default candidate bound: d-2 in the fixed regime, min(k-2, ceil(d/2))
/// in the star regime.
Index default_q(Index d, Index k);

namespace detail {
/// Index of the smallest minimizer (0-based) of a non-empty range.
std::size_t smallest_argmin(const std::vector<double>& values);
}  // namespace detail

}  // namespace tailpca

#endif
