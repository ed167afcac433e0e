// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ssf/linalg.hpp"
#include "ssf/tensor.hpp"

#include <span>
#include <vector>

namespace ssf {

struct MultilinearRank {
    Index l1 = 1;
    Index l2 = 1;
    Index l3 = 1;
};

/// Orthonormal factor matrices for the three modes of a field tensor. The
/// per-mode-update projected-energy objective is recorded in fit_trace and
/// is non-decreasing for the default update order.
struct TuckerBasis {
    Eigen::MatrixXd b1;  // M x L1
    Eigen::MatrixXd b2;  // N x L2
    Eigen::MatrixXd b3;  // I x L3
    DenseTensor mean_field{Shape({1})};  // M x N x I center, attached by the caller
    std::vector<double> fit_trace;
};

struct HooiOptions {
    double tol = 1e-8;  // relative objective change per sweep
    int max_iter = 100;
    /// Update the mode-3 projection with the previous sweep's mode-2 factor
    /// instead of the freshly updated one. Off by default; the default is
    /// the standard Gauss-Seidel sweep.
    bool stale_mode2_in_mode3 = false;
};

/// Truncated HOSVD: factor p = leading L_p left singular vectors of the
/// mode-p unfolding. Used as the deterministic starting point for hooi.
TuckerBasis hosvd_init(const DenseTensor& x, const MultilinearRank& r);

struct HooiResult {
    DenseTensor core{Shape({1})};
    TuckerBasis basis;
};

/// Higher-order orthogonal iteration: alternating per-mode SVD updates that
/// maximize the projected energy, followed by the closed-form core.
/// Initialization is the truncated HOSVD; the rank-(1,1,1) case additionally
/// restarts the sweep from combinations of leading per-mode singular vectors
/// (deterministic) because single-start alternating sweeps can stall in a
/// non-global basin there.
HooiResult hooi(const DenseTensor& x, const MultilinearRank& r, const HooiOptions& opts = {});

/// Closed-form core: x contracted with every factor transpose.
DenseTensor tucker_encode(const DenseTensor& x_star, const TuckerBasis& b);

/// Reconstruction via the three mode products, in the zero-mean domain; adding
/// mean_field is the caller's final step.
DenseTensor tucker_decode(const DenseTensor& s, const TuckerBasis& b);

struct MhooiResult {
    std::vector<DenseTensor> cores;  // one per snapshot
    TuckerBasis basis;
};

/// Joint factor learning over multiple equally shaped snapshots: HOOI on
/// their 4-way stack with the fourth factor pinned to the identity.
MhooiResult mhooi(std::span<const DenseTensor> snapshots, const MultilinearRank& r,
                  const HooiOptions& opts = {});

/// Equivalence check: the mode-3-constrained problem (identity horizontal
/// factors) is solved by an eigendecomposition of the mode-3 Gram matrix and
/// compared against the plain basis of leading left singular vectors.
struct Prop1Report {
    double projector_distance = 0.0;
};

Prop1Report verify_prop1(const DenseTensor& x, Index k);

/// Equivalence check with the horizontal factors pinned to Fourier matrices.
/// The constrained optimum weights the mode-3 unfolding by the Fourier
/// matrices, so for non-unitary F it may differ from the plain vertical
/// basis; both the projector distance and both residual objectives are
/// reported rather than asserted equal.
struct Prop2Report {
    double projector_distance = 0.0;
    double constrained_objective = 0.0;  // residual using the constrained-optimal vertical basis
    double classical_objective = 0.0;    // residual using the plain vertical basis
};

Prop2Report verify_prop2(const DenseTensor& x, Index nf1, Index nf2, Index kf, double lx,
                         double ly);

}  // namespace ssf
