#include "tailpca/angular.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tailpca/error.hpp"

namespace tailpca {

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
    if (values_.rows() < 1) throw_invalid("data matrix needs at least one row");
    if (values_.cols() < 2) throw_invalid("data matrix needs at least two columns");
    if (!values_.allFinite()) throw_input("data matrix contains non-finite entries");
}

namespace {

// Ascending ranks of one column, 1-based, average ranks on ties.
void average_ranks(const Vector& column, std::vector<double>& ranks) {
    const Index n = column.size();
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        if (column[a] != column[b]) return column[a] < column[b];
        return a < b;
    });
    ranks.assign(static_cast<std::size_t>(n), 0.0);
    Index i = 0;
    while (i < n) {
        Index j = i;
        while (j + 1 < n && column[order[static_cast<std::size_t>(j + 1)]] ==
                                column[order[static_cast<std::size_t>(i)]]) {
            ++j;
        }
        // positions i..j (0-based) share the average of ranks i+1..j+1
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (Index m = i; m <= j; ++m) {
            ranks[static_cast<std::size_t>(order[static_cast<std::size_t>(m)])] = rank;
        }
        i = j + 1;
    }
}

}  // namespace

MarginTransformResult frechet_margin_transform(const DataMatrix& data) {
    const Index n = data.rows();
    const Index d = data.cols();
    if (n < 2) throw_invalid("margin transform needs at least two rows");

    Matrix out(n, d);
    std::vector<Index> constant_columns;
    std::vector<double> ranks;
    for (Index j = 0; j < d; ++j) {
        const Vector column = data.values().col(j);
        if (column.maxCoeff() == column.minCoeff()) constant_columns.push_back(j);
        average_ranks(column, ranks);
        for (Index i = 0; i < n; ++i) {
            const double u = ranks[static_cast<std::size_t>(i)] / static_cast<double>(n + 1);
            out(i, j) = -1.0 / std::log(u);
        }
    }
    return MarginTransformResult{DataMatrix(std::move(out)), std::move(constant_columns)};
}

AngularSample::AngularSample(Matrix directions, std::vector<Index> source_indices)
    : directions_(std::move(directions)), source_indices_(std::move(source_indices)) {
    if (directions_.rows() < 1) throw_invalid("angular sample needs at least one direction");
    if (static_cast<Index>(source_indices_.size()) != directions_.rows()) {
        throw_invalid("source index count does not match direction count");
    }
    for (Index i = 0; i < directions_.rows(); ++i) {
        if (std::abs(directions_.row(i).norm() - 1.0) > 1e-10) {
            throw_invalid("direction rows must have unit norm");
        }
    }
    std::vector<Index> sorted = source_indices_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw_invalid("source indices must be distinct");
    }
}

AngularSample select_extremes(const DataMatrix& data, Index k) {
    const Index n = data.rows();
    if (k < 1) throw_input("k must be at least 1");
    if (k >= n) throw_input("k must be < n");

    Vector norms(n);
    for (Index i = 0; i < n; ++i) norms[i] = data.values().row(i).norm();

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        if (norms[a] != norms[b]) return norms[a] > norms[b];
        return a < b;
    });

    Matrix directions(k, data.cols());
    std::vector<Index> indices(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) {
        const Index row = order[static_cast<std::size_t>(i)];
        if (norms[row] <= 0.0) throw_input("zero-norm extreme");
        directions.row(i) = data.values().row(row) / norms[row];
        indices[static_cast<std::size_t>(i)] = row;
    }
    return AngularSample(std::move(directions), std::move(indices));
}

Vector empirical_mean_direction(const AngularSample& sample) {
    return sample.directions().colwise().mean();
}

AngularCovariance::AngularCovariance(Matrix matrix, Index k)
    : matrix_(std::move(matrix)), k_(k) {
    if (matrix_.rows() != matrix_.cols()) throw_invalid("covariance matrix must be square");
    if (!matrix_.allFinite()) throw_numeric("covariance matrix contains non-finite entries");
    if ((matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
        throw_numeric("covariance matrix is not symmetric");
    }
    if (matrix_.trace() > 1.0 + 1e-8) {
        throw_numeric("covariance trace exceeds 1, directions cannot be unit vectors");
    }
}

AngularCovariance empirical_angular_covariance(const AngularSample& sample) {
    const Index k = sample.k();
    if (k < 2) throw_input("need at least two extremes");

    const Vector mean = empirical_mean_direction(sample);
    const Matrix centered = sample.directions().rowwise() - mean.transpose();
    Matrix cov = Matrix::Zero(sample.d(), sample.d());
    cov.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(),
                                                   1.0 / static_cast<double>(k));
    cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();
    return AngularCovariance(std::move(cov), k);
}

}  // namespace tailpca
