// SPDX-License-Identifier: Apache-2.0
#include "ssf/eof.hpp"

namespace ssf {

DemeanResult demean_matrix(const Eigen::MatrixXd& y) {
    DemeanResult out;
    out.mean = y.rowwise().mean();
    out.centered = y.colwise() - out.mean;
    return out;
}

EofBasis learn_eof(const Eigen::MatrixXd& x, Index k) {
    if (k < 1 || k > x.rows()) {
        throw DomainError("learn_eof: k = " + std::to_string(k) + " out of range 1.." +
                          std::to_string(x.rows()));
    }
    LeadingVectors lead = leading_left_singular_vectors(x, k);
    EofBasis b;
    b.mean = Eigen::VectorXd::Zero(x.rows());
    b.factors = std::move(lead.u);
    b.eigenvalues = Eigen::VectorXd::Zero(k);
    const Index have = std::min<Index>(k, lead.singular_values.size());
    for (Index i = 0; i < have; ++i) {
        b.eigenvalues(i) = lead.singular_values(i) * lead.singular_values(i);
    }
    return b;
}

Eigen::MatrixXd eof_encode(const Eigen::MatrixXd& x_star, const EofBasis& b) {
    if (x_star.rows() != b.factors.rows()) {
        throw DomainError("eof_encode: sample has " + std::to_string(x_star.rows()) +
                          " rows, basis expects " + std::to_string(b.factors.rows()));
    }
    return b.factors.transpose() * x_star;
}

Eigen::MatrixXd eof_decode(const Eigen::MatrixXd& w, const EofBasis& b) {
    if (w.rows() != b.factors.cols()) {
        throw DomainError("eof_decode: coefficients have " + std::to_string(w.rows()) +
                          " rows, basis has " + std::to_string(b.factors.cols()) + " columns");
    }
    return b.factors * w;
}

}  // namespace ssf
