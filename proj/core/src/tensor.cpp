// SPDX-License-Identifier: Apache-2.0
#include "ssf/tensor.hpp"

#include <limits>
#include <sstream>

namespace ssf {

Shape::Shape(std::vector<Index> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw DomainError("Shape: order must be >= 1");
    }
    Index count = 1;
    for (Index d : dims_) {
        if (d < 1) {
            throw DomainError("Shape: every dimension must be >= 1, got " + std::to_string(d));
        }
        if (__builtin_mul_overflow(count, d, &count)) {
            throw ResourceError("Shape: element count overflows the index type");
        }
    }
    element_count_ = count;
}

Index Shape::dim(Index p) const {
    if (p < 1 || p > order()) {
        throw DomainError("Shape: mode " + std::to_string(p) + " out of range 1.." +
                          std::to_string(order()));
    }
    return dims_[static_cast<size_t>(p - 1)];
}

std::string Shape::to_string() const {
    std::ostringstream os;
    for (size_t k = 0; k < dims_.size(); ++k) {
        os << (k ? "x" : "") << dims_[k];
    }
    return os.str();
}

DenseTensor::DenseTensor(Shape shape)
    : shape_(std::move(shape)), data_(static_cast<size_t>(shape_.element_count()), 0.0) {}

DenseTensor::DenseTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (static_cast<Index>(data_.size()) != shape_.element_count()) {
        throw DomainError("DenseTensor: data length " + std::to_string(data_.size()) +
                          " does not match shape " + shape_.to_string());
    }
}

size_t DenseTensor::linear_index(std::span<const Index> idx) const {
    const auto& dims = shape_.dims();
    if (idx.size() != dims.size()) {
        throw DomainError("DenseTensor: multi-index order mismatch");
    }
    Index lin = 0;
    Index stride = 1;
    for (size_t k = 0; k < dims.size(); ++k) {
        if (idx[k] < 0 || idx[k] >= dims[k]) {
            throw DomainError("DenseTensor: index out of range in mode " + std::to_string(k + 1));
        }
        lin += idx[k] * stride;
        stride *= dims[k];
    }
    return static_cast<size_t>(lin);
}

namespace {

// Column strides I_k of the unfolding formula, 0-based: stride[k] = prod of
// dims[m] for m < k, m != p. stride[p] is unused.
std::vector<Index> unfold_strides(const std::vector<Index>& dims, Index p) {
    std::vector<Index> stride(dims.size(), 0);
    Index acc = 1;
    for (size_t k = 0; k < dims.size(); ++k) {
        if (static_cast<Index>(k) == p) continue;
        stride[k] = acc;
        acc *= dims[k];
    }
    return stride;
}

void check_mode(const Shape& s, Index mode) {
    if (mode < 1 || mode > s.order()) {
        throw DomainError("mode " + std::to_string(mode) + " out of range for tensor of order " +
                          std::to_string(s.order()));
    }
}

}  // namespace

Eigen::MatrixXd unfold(const DenseTensor& t, Index mode) {
    check_mode(t.shape(), mode);
    const auto& dims = t.shape().dims();
    const Index p = mode - 1;
    const Index rows = dims[static_cast<size_t>(p)];
    const Index cols = t.size() / rows;
    const auto stride = unfold_strides(dims, p);

    Eigen::MatrixXd out(rows, cols);
    std::vector<Index> idx(dims.size(), 0);
    const double* src = t.data().data();
    for (Index lin = 0; lin < t.size(); ++lin) {
        Index q = 0;
        for (size_t k = 0; k < dims.size(); ++k) {
            if (static_cast<Index>(k) != p) q += idx[k] * stride[k];
        }
        out(idx[static_cast<size_t>(p)], q) = src[lin];
        for (size_t k = 0; k < dims.size(); ++k) {
            if (++idx[k] < dims[k]) break;
            idx[k] = 0;
        }
    }
    return out;
}

DenseTensor fold(const Eigen::MatrixXd& m, Index mode, const Shape& s) {
    check_mode(s, mode);
    const auto& dims = s.dims();
    const Index p = mode - 1;
    const Index rows = dims[static_cast<size_t>(p)];
    const Index cols = s.element_count() / rows;
    if (m.rows() != rows || m.cols() != cols) {
        throw DomainError("fold: matrix " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + " inconsistent with shape " + s.to_string() +
                          " at mode " + std::to_string(mode));
    }
    const auto stride = unfold_strides(dims, p);

    DenseTensor out(s);
    std::vector<Index> idx(dims.size(), 0);
    double* dst = out.data().data();
    for (Index lin = 0; lin < out.size(); ++lin) {
        Index q = 0;
        for (size_t k = 0; k < dims.size(); ++k) {
            if (static_cast<Index>(k) != p) q += idx[k] * stride[k];
        }
        dst[lin] = m(idx[static_cast<size_t>(p)], q);
        for (size_t k = 0; k < dims.size(); ++k) {
            if (++idx[k] < dims[k]) break;
            idx[k] = 0;
        }
    }
    return out;
}

DenseTensor mode_product(const DenseTensor& t, const Eigen::MatrixXd& m, Index mode) {
    check_mode(t.shape(), mode);
    if (m.cols() != t.shape().dim(mode)) {
        throw DomainError("mode_product: matrix has " + std::to_string(m.cols()) +
                          " columns but mode " + std::to_string(mode) + " has size " +
                          std::to_string(t.shape().dim(mode)));
    }
    std::vector<Index> new_dims = t.shape().dims();
    new_dims[static_cast<size_t>(mode - 1)] = m.rows();
    Eigen::MatrixXd product = m * unfold(t, mode);
    return fold(product, mode, Shape(new_dims));
}

namespace {

template <typename Mat>
Mat kronecker_impl(const Mat& a, const Mat& b) {
    Index rows = 0;
    Index cols = 0;
    if (__builtin_mul_overflow(static_cast<Index>(a.rows()), static_cast<Index>(b.rows()), &rows) ||
        __builtin_mul_overflow(static_cast<Index>(a.cols()), static_cast<Index>(b.cols()), &cols)) {
        throw ResourceError("kronecker: result size overflows the index type");
    }
    Mat out(rows, cols);
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return kronecker_impl(a, b);
}

Eigen::MatrixXcd kronecker(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return kronecker_impl(a, b);
}

double frobenius_norm(const DenseTensor& t) {
    return t.as_vector().norm();
}

DenseTensor stack_mode4(std::span<const DenseTensor> tensors) {
    if (tensors.empty()) {
        throw DomainError("stack_mode4: empty input");
    }
    const Shape& base = tensors.front().shape();
    if (base.order() != 3) {
        throw DomainError("stack_mode4: inputs must be 3-way tensors");
    }
    for (const auto& t : tensors) {
        if (t.shape() != base) {
            throw DomainError("stack_mode4: shape mismatch, expected " + base.to_string() +
                              ", got " + t.shape().to_string());
        }
    }
    std::vector<Index> dims = base.dims();
    dims.push_back(static_cast<Index>(tensors.size()));
    DenseTensor out{Shape(dims)};
    // The fourth mode is the slowest-varying one, so each slice is a
    // contiguous block of the output buffer.
    double* dst = out.data().data();
    const size_t slice = static_cast<size_t>(base.element_count());
    for (const auto& t : tensors) {
        std::copy(t.data().begin(), t.data().end(), dst);
        dst += slice;
    }
    return out;
}

}  // namespace ssf
