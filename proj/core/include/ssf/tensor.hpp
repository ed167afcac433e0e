// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ssf/errors.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace ssf {

using Index = std::int64_t;

/// Dimensions of a dense tensor, one entry per mode. Modes are numbered
/// 1..order() in every public interface, matching the usual multilinear
/// algebra convention; storage indices are 0-based.
class Shape {
public:
    explicit Shape(std::vector<Index> dims);
    Shape(std::initializer_list<Index> dims) : Shape(std::vector<Index>(dims)) {}

    [[nodiscard]] Index order() const noexcept { return static_cast<Index>(dims_.size()); }
    /// Size of mode `p` (1-based).
    [[nodiscard]] Index dim(Index p) const;
    [[nodiscard]] const std::vector<Index>& dims() const noexcept { return dims_; }
    [[nodiscard]] Index element_count() const noexcept { return element_count_; }

    bool operator==(const Shape& other) const noexcept { return dims_ == other.dims_; }
    bool operator!=(const Shape& other) const noexcept { return !(*this == other); }

    [[nodiscard]] std::string to_string() const;

private:
    std::vector<Index> dims_;
    Index element_count_ = 0;
};

/// Dense N-way tensor of 64-bit reals.
///
/// Storage is contiguous with the mode-1 index fastest (column-major over
/// modes), so mode-1 fibers are contiguous. Tensors are immutable value
/// types in spirit: all operations below are pure functions.
class DenseTensor {
public:
    explicit DenseTensor(Shape shape);
    DenseTensor(Shape shape, std::vector<double> data);

    static DenseTensor zeros(Shape shape) { return DenseTensor(std::move(shape)); }

    [[nodiscard]] const Shape& shape() const noexcept { return shape_; }
    [[nodiscard]] Index order() const noexcept { return shape_.order(); }
    [[nodiscard]] Index size() const noexcept { return shape_.element_count(); }

    [[nodiscard]] double operator[](Index linear) const { return data_[static_cast<size_t>(linear)]; }
    double& operator[](Index linear) { return data_[static_cast<size_t>(linear)]; }

    /// Element access by 0-based multi-index.
    [[nodiscard]] double at(std::span<const Index> idx) const { return data_[linear_index(idx)]; }
    double& at(std::span<const Index> idx) { return data_[linear_index(idx)]; }
    [[nodiscard]] double at(std::initializer_list<Index> idx) const {
        return at(std::span<const Index>(idx.begin(), idx.size()));
    }
    double& at(std::initializer_list<Index> idx) {
        return at(std::span<const Index>(idx.begin(), idx.size()));
    }

    [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

    [[nodiscard]] Eigen::Map<const Eigen::VectorXd> as_vector() const {
        return {data_.data(), static_cast<Eigen::Index>(data_.size())};
    }

    bool operator==(const DenseTensor& other) const {
        return shape_ == other.shape_ && data_ == other.data_;
    }

private:
    [[nodiscard]] size_t linear_index(std::span<const Index> idx) const;

    Shape shape_;
    std::vector<double> data_;
};

/// Mode-p unfolding. The result has dim(p) rows and element_count()/dim(p)
/// columns; element (j_p, q) with q = 1 + sum_{k != p} (j_k - 1) * I_k and
/// I_k = prod_{m < k, m != p} J_m (all 1-based here, matching the formula).
Eigen::MatrixXd unfold(const DenseTensor& t, Index mode);

/// Inverse of unfold: rebuilds a tensor of shape `s` from its mode-p unfolding.
DenseTensor fold(const Eigen::MatrixXd& m, Index mode, const Shape& s);

/// p-mode product: contracts mode `mode` of `t` with the columns of `m`.
/// Equivalent to fold(m * unfold(t, mode), mode, new_shape).
DenseTensor mode_product(const DenseTensor& t, const Eigen::MatrixXd& m, Index mode);

/// Kronecker product a (x) b with the usual block layout: block (i,j) = a(i,j)*b.
Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
Eigen::MatrixXcd kronecker(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

[[nodiscard]] double frobenius_norm(const DenseTensor& t);

/// Stacks equally shaped 3-way tensors along a new fourth mode.
DenseTensor stack_mode4(std::span<const DenseTensor> tensors);

}  // namespace ssf
