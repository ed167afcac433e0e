// SPDX-License-Identifier: Apache-2.0
#include "ssf/fourier_eof.hpp"

#include <cmath>
#include <numbers>

namespace ssf {

Eigen::MatrixXcd build_fourier_matrix(Index n_rows, Index n_basis, double period) {
    if (n_rows < 1 || n_basis < 1) {
        throw DomainError("build_fourier_matrix: sizes must be positive");
    }
    if (!(period > 0.0)) {
        throw DomainError("build_fourier_matrix: period must be positive");
    }
    Eigen::MatrixXcd f(n_rows, n_basis);
    const double w = 2.0 * std::numbers::pi / period;
    for (Index r = 0; r < n_rows; ++r) {
        for (Index c = 0; c < n_basis; ++c) {
            const double phase = w * static_cast<double>(r) * static_cast<double>(c);
            f(r, c) = std::complex<double>(std::cos(phase), std::sin(phase));
        }
    }
    return f;
}

FourierEofBasis learn_fourier_eof(const DenseTensor& x, Index nf1, Index nf2, Index kf,
                                  double lx, double ly) {
    if (x.order() != 3) {
        throw DomainError("learn_fourier_eof: expected a 3-way tensor");
    }
    const Index i_dim = x.shape().dim(3);
    if (nf1 < 1 || nf2 < 1) {
        throw DomainError("learn_fourier_eof: nf1 and nf2 must be positive");
    }
    if (kf < 1 || kf > i_dim) {
        throw DomainError("learn_fourier_eof: kf = " + std::to_string(kf) + " out of range 1.." +
                          std::to_string(i_dim));
    }
    FourierEofBasis b;
    b.f1 = build_fourier_matrix(x.shape().dim(1), nf1, lx);
    b.f2 = build_fourier_matrix(x.shape().dim(2), nf2, ly);
    b.eof = learn_eof(unfold(x, 3), kf).factors;
    b.lx = lx;
    b.ly = ly;
    b.mean_field = DenseTensor::zeros(x.shape());
    return b;
}

Eigen::MatrixXcd fourier_eof_encode(const DenseTensor& x_star, const FourierEofBasis& b) {
    if (x_star.order() != 3 || x_star.shape().dim(1) != b.m() || x_star.shape().dim(2) != b.n() ||
        x_star.shape().dim(3) != b.i()) {
        throw DomainError("fourier_eof_encode: sample shape " + x_star.shape().to_string() +
                          " does not match basis");
    }
    const Eigen::MatrixXcd f = kronecker(b.f2, b.f1);  // MN x NF1*NF2
    const Eigen::MatrixXcd ft_pinv = pinv(Eigen::MatrixXcd(f.transpose()));
    const Eigen::MatrixXd xu = unfold(x_star, 3);  // I x MN
    return b.eof.transpose() * xu.cast<std::complex<double>>() * ft_pinv;
}

FourierDecodeResult fourier_eof_decode(const Eigen::MatrixXcd& w, const FourierEofBasis& b) {
    if (w.rows() != b.eof.cols() || w.cols() != b.f1.cols() * b.f2.cols()) {
        throw DomainError("fourier_eof_decode: coefficient matrix is " + std::to_string(w.rows()) +
                          "x" + std::to_string(w.cols()) + ", basis expects " +
                          std::to_string(b.eof.cols()) + "x" +
                          std::to_string(b.f1.cols() * b.f2.cols()));
    }
    const Eigen::MatrixXcd f = kronecker(b.f2, b.f1);
    const Eigen::MatrixXcd xu = b.eof.cast<std::complex<double>>() * w * f.transpose();  // I x MN
    FourierDecodeResult out;
    const double full = xu.norm();
    out.imag_residual = full > 0.0 ? xu.imag().norm() / full : 0.0;
    out.field = fold(xu.real(), 3, Shape({b.m(), b.n(), b.i()}));
    return out;
}

}  // namespace ssf
