// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ssf/errors.hpp"
#include "ssf/tensor.hpp"

#include <Eigen/Dense>

#include <complex>

namespace ssf {

/// Thin singular value decomposition m = u * diag(s) * v^H with s descending.
///
/// Deterministic for a fixed input. Columns of u and v follow a fixed sign
/// convention: the entry of largest magnitude in each left singular vector is
/// made nonnegative real (ties broken by lowest row index), with the matching
/// phase applied to the right singular vector.
template <typename Scalar>
struct SvdResult {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> u;
    Eigen::VectorXd singular_values;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> v;
};

SvdResult<double> svd(const Eigen::MatrixXd& m);
SvdResult<std::complex<double>> svd(const Eigen::MatrixXcd& m);

/// First r left singular vectors of m, as an orthonormal I x r matrix.
///
/// When r exceeds the numerical rank the remaining columns are completed to
/// an orthonormal set from the null space and `rank_deficient` is set; this
/// covers iterative callers that request more vectors than the current
/// iterate supports. Requires r <= rows(m).
struct LeadingVectors {
    Eigen::MatrixXd u;
    Eigen::VectorXd singular_values;  // all min(rows, cols) values, descending
    bool rank_deficient = false;
};

LeadingVectors leading_left_singular_vectors(const Eigen::MatrixXd& m, Index r);

/// Moore-Penrose pseudo-inverse. Singular values below
/// max(rows, cols) * eps * s_max are treated as zero.
Eigen::MatrixXd pinv(const Eigen::MatrixXd& m);
Eigen::MatrixXcd pinv(const Eigen::MatrixXcd& m);

/// Minimum-norm least-squares solution of a * x = b (Frobenius objective).
Eigen::MatrixXd lstsq(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace ssf
