// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ssf/linalg.hpp"

#include <Eigen/Dense>

namespace ssf {

/// Orthonormal basis of leading principal directions of a centered profile
/// matrix, with the associated eigenvalues of the correlation matrix.
struct EofBasis {
    Eigen::VectorXd mean;         // length-I center, attached by the caller (zeros after learn_eof)
    Eigen::MatrixXd factors;      // I x K, orthonormal columns
    Eigen::VectorXd eigenvalues;  // K values, descending, nonnegative
};

struct DemeanResult {
    Eigen::MatrixXd centered;
    Eigen::VectorXd mean;
};

/// Subtracts the row-wise average from every column of y.
DemeanResult demean_matrix(const Eigen::MatrixXd& y);

/// Learns the k leading basis vectors of the zero-mean matrix x (caller is
/// responsible for centering). Eigenvalues are the squared singular values.
EofBasis learn_eof(const Eigen::MatrixXd& x, Index k);

/// Coefficients of x_star in the basis: factors^T * x_star. Least-squares
/// optimal because the factors are orthonormal.
Eigen::MatrixXd eof_encode(const Eigen::MatrixXd& x_star, const EofBasis& b);

/// Reconstruction factors * w, in the zero-mean domain; adding the mean is
/// the caller's final step.
Eigen::MatrixXd eof_decode(const Eigen::MatrixXd& w, const EofBasis& b);

}  // namespace ssf
