#ifndef TAILPCA_ANGULAR_HPP
#define TAILPCA_ANGULAR_HPP

#include <Eigen/Dense>
#include <vector>

namespace tailpca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// n observations by d coordinates of raw (typically heavy-tailed) data.
/// Invariants: every entry finite, n >= 1, d >= 2.
class DataMatrix {
public:
    explicit DataMatrix(Matrix values);

    Index rows() const { return values_.rows(); }
    Index cols() const { return values_.cols(); }
    const Matrix& values() const { return values_; }

private:
    Matrix values_;
};

struct MarginTransformResult {
    DataMatrix data;
    /// Columns whose entries are all tied; their output is constant.
    std::vector<Index> constant_columns;
};

/// Replaces each column by -1/log(rank/(n+1)) of its ascending within-column
/// ranks (average ranks on ties), giving standard-Frechet empirical margins.
/// Requires n >= 2. Constant columns stay defined and are flagged.
MarginTransformResult frechet_margin_transform(const DataMatrix& data);

/// Unit directions of the k largest-norm observations, with their row indices.
class AngularSample {
public:
    AngularSample(Matrix directions, std::vector<Index> source_indices);

    Index k() const { return directions_.rows(); }
    Index d() const { return directions_.cols(); }
    const Matrix& directions() const { return directions_; }
    const std::vector<Index>& source_indices() const { return source_indices_; }

private:
    Matrix directions_;
    std::vector<Index> source_indices_;
};

/// Picks the k rows with the largest Euclidean norms (ties at the threshold
/// broken by lower row index, so exactly k rows come back) and normalizes
/// each to unit norm. Requires 1 <= k < n; a selected zero-norm row is an error.
AngularSample select_extremes(const DataMatrix& data, Index k);

/// Mean of the k unit directions.
Vector empirical_mean_direction(const AngularSample& sample);

/// Symmetric d x d covariance of the extreme directions, with divisor k.
class AngularCovariance {
public:
    AngularCovariance(Matrix matrix, Index k);

    const Matrix& matrix() const { return matrix_; }
    Index d() const { return matrix_.rows(); }
    Index k() const { return k_; }

private:
    Matrix matrix_;
    Index k_;
};

/// (1/k) * sum_j (theta_j - mean)(theta_j - mean)^T over the k directions.
/// Requires k >= 2. The divisor is k, not k-1.
AngularCovariance empirical_angular_covariance(const AngularSample& sample);

}  // namespace tailpca

#endif
