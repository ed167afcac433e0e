// SPDX-License-Identifier: Apache-2.0
#include "ssf/linalg.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace ssf {

namespace {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

double magnitude(double x) { return std::abs(x); }
double magnitude(const std::complex<double>& x) { return std::abs(x); }

// Make the largest-magnitude entry of each column of u nonnegative real,
// applying the compensating phase to the matching column of v (if any).
template <typename Scalar>
void fix_column_signs(Mat<Scalar>& u, Mat<Scalar>* v) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < u.rows(); ++r) {
            double mag = magnitude(u(r, c));
            if (mag > best) {
                best = mag;
                arg = r;
            }
        }
        if (best <= 0.0) continue;
        Scalar phase = u(arg, c) / Scalar(best);
        // phase has unit magnitude; dividing by it rotates the pivot onto
        // the nonnegative real axis.
        u.col(c) /= phase;
        if (v && c < v->cols()) v->col(c) /= phase;
    }
}

template <typename Scalar>
SvdResult<Scalar> svd_impl(const Mat<Scalar>& m) {
    if (!m.allFinite()) {
        throw DomainError("svd: input has non-finite entries");
    }
    Eigen::BDCSVD<Mat<Scalar>> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success) {
        throw NumericError("svd: decomposition did not converge within the iteration cap");
    }
    SvdResult<Scalar> out;
    out.u = dec.matrixU();
    out.v = dec.matrixV();
    out.singular_values = dec.singularValues();
    fix_column_signs(out.u, &out.v);
    return out;
}

template <typename Scalar>
Mat<Scalar> pinv_impl(const Mat<Scalar>& m) {
    SvdResult<Scalar> dec = svd_impl<Scalar>(m);
    const double s_max = dec.singular_values.size() ? dec.singular_values(0) : 0.0;
    const double tol = static_cast<double>(std::max(m.rows(), m.cols())) *
                       std::numeric_limits<double>::epsilon() * s_max;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(dec.singular_values.size());
    for (Eigen::Index i = 0; i < inv.size(); ++i) {
        if (dec.singular_values(i) > tol) inv(i) = 1.0 / dec.singular_values(i);
    }
    return dec.v * inv.asDiagonal() * dec.u.adjoint();
}

}  // namespace

SvdResult<double> svd(const Eigen::MatrixXd& m) { return svd_impl<double>(m); }

SvdResult<std::complex<double>> svd(const Eigen::MatrixXcd& m) {
    return svd_impl<std::complex<double>>(m);
}

LeadingVectors leading_left_singular_vectors(const Eigen::MatrixXd& m, Index r) {
    if (r < 1 || r > m.rows()) {
        throw DomainError("leading_left_singular_vectors: r = " + std::to_string(r) +
                          " out of range 1.." + std::to_string(m.rows()));
    }
    if (!m.allFinite()) {
        throw DomainError("leading_left_singular_vectors: input has non-finite entries");
    }
    const Index thin = std::min<Index>(m.rows(), m.cols());
    LeadingVectors out;
    if (r <= thin) {
        Eigen::BDCSVD<Eigen::MatrixXd> dec(m, Eigen::ComputeThinU);
        if (dec.info() != Eigen::Success) {
            throw NumericError("leading_left_singular_vectors: SVD did not converge");
        }
        out.u = dec.matrixU().leftCols(r);
        out.singular_values = dec.singularValues();
    } else {
        // Need null-space columns beyond min(rows, cols): take the full U.
        Eigen::BDCSVD<Eigen::MatrixXd> dec(m, Eigen::ComputeFullU);
        if (dec.info() != Eigen::Success) {
            throw NumericError("leading_left_singular_vectors: SVD did not converge");
        }
        out.u = dec.matrixU().leftCols(r);
        out.singular_values = dec.singularValues();
    }
    fix_column_signs(out.u, static_cast<Eigen::MatrixXd*>(nullptr));
    const double s_max = out.singular_values.size() ? out.singular_values(0) : 0.0;
    const double tol = static_cast<double>(std::max(m.rows(), m.cols())) *
                       std::numeric_limits<double>::epsilon() * s_max;
    Index rank = 0;
    for (Eigen::Index i = 0; i < out.singular_values.size(); ++i) {
        if (out.singular_values(i) > tol) ++rank;
    }
    out.rank_deficient = r > rank;
    return out;
}

Eigen::MatrixXd pinv(const Eigen::MatrixXd& m) { return pinv_impl<double>(m); }

Eigen::MatrixXcd pinv(const Eigen::MatrixXcd& m) {
    return pinv_impl<std::complex<double>>(m);
}

Eigen::MatrixXd lstsq(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows()) {
        throw DomainError("lstsq: a has " + std::to_string(a.rows()) + " rows, b has " +
                          std::to_string(b.rows()));
    }
    SvdResult<double> dec = svd(a);
    const double s_max = dec.singular_values.size() ? dec.singular_values(0) : 0.0;
    const double tol = static_cast<double>(std::max(a.rows(), a.cols())) *
                       std::numeric_limits<double>::epsilon() * s_max;
    Eigen::MatrixXd ub = dec.u.transpose() * b;
    for (Eigen::Index i = 0; i < dec.singular_values.size(); ++i) {
        if (dec.singular_values(i) > tol) {
            ub.row(i) /= dec.singular_values(i);
        } else {
            ub.row(i).setZero();
        }
    }
    return dec.v * ub;
}

}  // namespace ssf
