// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ssf/eof.hpp"
#include "ssf/tensor.hpp"

#include <Eigen/Dense>

#include <complex>

namespace ssf {

/// Separable basis for 3-way fields: complex exponential matrices over the
/// two horizontal axes and a learned orthonormal vertical basis.
struct FourierEofBasis {
    Eigen::MatrixXcd f1;     // M x NF1
    Eigen::MatrixXcd f2;     // N x NF2
    Eigen::MatrixXd eof;     // I x KF, orthonormal
    double lx = 0.0;         // horizontal periodicities, in grid points
    double ly = 0.0;
    DenseTensor mean_field{Shape({1})};  // M x N x I center, attached by the caller

    [[nodiscard]] Index m() const { return f1.rows(); }
    [[nodiscard]] Index n() const { return f2.rows(); }
    [[nodiscard]] Index i() const { return eof.rows(); }
};

/// Entry (m, f) = exp(2*pi*i * m * f / period) for 0-based m, f. With
/// period == n_rows and n_basis <= n_rows the columns are orthogonal with
/// squared norm n_rows.
Eigen::MatrixXcd build_fourier_matrix(Index n_rows, Index n_basis, double period);

/// Learns the vertical basis from the mode-3 unfolding of the zero-mean
/// tensor x and builds the two horizontal exponential matrices.
FourierEofBasis learn_fourier_eof(const DenseTensor& x, Index nf1, Index nf2, Index kf,
                                  double lx, double ly);

/// Coefficients W = eof^T * X_(3) * pinv(F^T) with F = f2 (x) f1;
/// result is KF x (NF1*NF2), complex.
Eigen::MatrixXcd fourier_eof_encode(const DenseTensor& x_star, const FourierEofBasis& b);

struct FourierDecodeResult {
    DenseTensor field{Shape({1})};  // M x N x I, zero-mean domain
    double imag_residual = 0.0;     // |Im| / |full| of the complex reconstruction
};

/// Folds the real part of eof * w * F^T back into an M x N x I tensor. The
/// discarded imaginary energy is reported as a relative residual.
FourierDecodeResult fourier_eof_decode(const Eigen::MatrixXcd& w, const FourierEofBasis& b);

}  // namespace ssf
