// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ssf/errors.hpp"
#include "ssf/tensor.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace ssf {

/// Over-complete dictionary with unit-norm atoms and the per-iteration
/// training objective ||X - Q V||_F^2 (non-increasing).
struct KsvdDictionary {
    Eigen::MatrixXd atoms;  // I x Z, Z >= I, unit-norm columns
    int sparsity = 0;       // T, nonzero budget per coded column
    std::vector<double> train_objective;
};

/// One sparse coefficient per (atom index, value) pair; at most T per column.
struct SparseCode {
    Index rows = 0;  // Z
    std::vector<std::vector<std::pair<Index, double>>> columns;

    [[nodiscard]] Index cols() const { return static_cast<Index>(columns.size()); }
    [[nodiscard]] Eigen::MatrixXd to_dense() const;
};

/// Dictionary plus the centering vector it was trained against; the unit
/// that encode/decode pipelines and serialization work with.
struct KsvdBasis {
    KsvdDictionary dictionary;
    Eigen::VectorXd mean;  // length I
};

/// Orthogonal matching pursuit for one signal: greedily selects up to t
/// atoms by maximal |<atom, residual>| (ties to the lowest index),
/// re-solving the least-squares fit on the selected set each step. A zero
/// signal yields an empty code. Atoms must be unit-norm.
std::vector<std::pair<Index, double>> omp(const Eigen::VectorXd& x, const Eigen::MatrixXd& dict,
                                          int t);

struct KsvdOptions {
    int max_iter = 30;
    double rel_improvement_tol = 1e-6;
    /// Optional I x Z starting dictionary (columns are normalized); when
    /// absent, z distinct training columns are drawn with the seed.
    std::optional<Eigen::MatrixXd> initial_dictionary;
};

/// Alternating sparse coding (OMP) and atom-wise rank-1 dictionary updates.
/// Unused atoms are replaced by the worst-represented training column.
std::pair<KsvdDictionary, SparseCode> ksvd_learn(const Eigen::MatrixXd& x, Index z, int t,
                                                 const KsvdOptions& opts, std::uint64_t seed);

/// Column-wise OMP with the dictionary's sparsity budget.
SparseCode ksvd_encode(const Eigen::MatrixXd& x_star, const KsvdDictionary& d);

/// Dense reconstruction Q * V.
Eigen::MatrixXd ksvd_decode(const SparseCode& code, const KsvdDictionary& d);

}  // namespace ssf
