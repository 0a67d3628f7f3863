#ifndef TAILPCA_SPECTRUM_HPP
#define TAILPCA_SPECTRUM_HPP

#include <vector>

#include "tailpca/angular.hpp"

namespace tailpca {

/// Descending eigenvalues of a symmetric covariance estimate, with the
/// dimension d and the extreme count k they came from.
class Spectrum {
public:
    /// `eigenvalues` must be non-increasing and no smaller than -1e-8;
    /// entries in [-1e-8, 0) are clamped to 0.
    Spectrum(Vector eigenvalues, Index d, Index k);

    const Vector& eigenvalues() const { return eigenvalues_; }
    double operator[](Index i) const { return eigenvalues_[i]; }
    Index size() const { return eigenvalues_.size(); }
    Index d() const { return d_; }
    Index k() const { return k_; }

private:
    Vector eigenvalues_;
    Index d_;
    Index k_;
};

/// Eigenvalues of the symmetric covariance matrix in descending order.
/// Deterministic for identical input bits.
Spectrum eigenvalues_descending(const AngularCovariance& cov);

/// Scree diagnostics: eigenvalues scaled by the largest one, plus their
/// scaled consecutive differences.
struct ScreeTable {
    std::vector<double> scaled;      ///< lambda_i / lambda_1, i = 1..limit
    std::vector<double> increments;  ///< (lambda_i - lambda_{i+1}) / lambda_1
};

/// First `limit` scaled eigenvalues and their limit-1 scaled differences.
/// Requires lambda_1 > 0 and 1 <= limit <= d.
ScreeTable scree(const Spectrum& spectrum, Index limit);

}  // namespace tailpca

#endif
