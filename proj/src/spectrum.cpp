#include "tailpca/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include "tailpca/error.hpp"

namespace tailpca {

namespace {
constexpr double kPsdSlack = 1e-8;
}

Spectrum::Spectrum(Vector eigenvalues, Index d, Index k)
    : eigenvalues_(std::move(eigenvalues)), d_(d), k_(k) {
    if (eigenvalues_.size() != d_) throw_invalid("spectrum length must equal d");
    if (!eigenvalues_.allFinite()) throw_numeric("spectrum contains non-finite values");
    for (Index i = 0; i + 1 < eigenvalues_.size(); ++i) {
        if (eigenvalues_[i] < eigenvalues_[i + 1]) {
            throw_invalid("spectrum must be sorted non-increasing");
        }
    }
    for (Index i = 0; i < eigenvalues_.size(); ++i) {
        if (eigenvalues_[i] < -kPsdSlack) {
            throw_numeric("eigenvalue below the positive semidefinite tolerance");
        }
        if (eigenvalues_[i] < 0.0) eigenvalues_[i] = 0.0;
    }
}

Spectrum eigenvalues_descending(const AngularCovariance& cov) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(cov.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw_numeric("eigenvalue computation failed");
    return Spectrum(solver.eigenvalues().reverse(), cov.d(), cov.k());
}

ScreeTable scree(const Spectrum& spectrum, Index limit) {
    if (limit < 1 || limit > spectrum.size()) throw_invalid("scree limit out of range");
    if (spectrum[0] <= 0.0) throw_numeric("degenerate spectrum");

    ScreeTable table;
    table.scaled.reserve(static_cast<std::size_t>(limit));
    for (Index i = 0; i < limit; ++i) table.scaled.push_back(spectrum[i] / spectrum[0]);
    table.increments.reserve(static_cast<std::size_t>(limit > 0 ? limit - 1 : 0));
    for (Index i = 0; i + 1 < limit; ++i) {
        table.increments.push_back((spectrum[i] - spectrum[i + 1]) / spectrum[0]);
    }
    return table;
}

}  // namespace tailpca
