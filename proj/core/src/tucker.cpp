// SPDX-License-Identifier: Apache-2.0
#include "ssf/tucker.hpp"

#include "ssf/eof.hpp"
#include "ssf/fourier_eof.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace ssf {

namespace {

void check_field_tensor(const DenseTensor& x, const char* who) {
    if (x.order() != 3) {
        throw DomainError(std::string(who) + ": expected a 3-way tensor, got order " +
                          std::to_string(x.order()));
    }
}

void check_finite(const DenseTensor& x, const char* who) {
    for (double v : x.data()) {
        if (!std::isfinite(v)) {
            throw DomainError(std::string(who) + ": input has non-finite entries");
        }
    }
}

void check_rank(const DenseTensor& x, const MultilinearRank& r, const char* who) {
    const Index dims[3] = {x.shape().dim(1), x.shape().dim(2), x.shape().dim(3)};
    const Index ls[3] = {r.l1, r.l2, r.l3};
    for (int p = 0; p < 3; ++p) {
        if (ls[p] < 1 || ls[p] > dims[p]) {
            throw DomainError(std::string(who) + ": rank L" + std::to_string(p + 1) + " = " +
                              std::to_string(ls[p]) + " out of range 1.." +
                              std::to_string(dims[p]));
        }
    }
}

// x projected by the factor transposes on every mode in 1..3 except `skip`
// (0 = none). Works for 3-way fields and their 4-way stacks; a 4th mode is
// left untouched, which is the identity fourth factor.
DenseTensor project_others(const DenseTensor& x, const Eigen::MatrixXd& b1,
                           const Eigen::MatrixXd& b2, const Eigen::MatrixXd& b3, Index skip) {
    DenseTensor y = x;
    if (skip != 1) y = mode_product(y, b1.transpose(), 1);
    if (skip != 2) y = mode_product(y, b2.transpose(), 2);
    if (skip != 3) y = mode_product(y, b3.transpose(), 3);
    return y;
}

double projected_energy(const DenseTensor& x, const TuckerBasis& b) {
    const DenseTensor s = project_others(x, b.b1, b.b2, b.b3, 0);
    const double n = frobenius_norm(s);
    return n * n;
}

double top_energy(const Eigen::VectorXd& singular_values, Index l) {
    double acc = 0.0;
    const Index have = std::min<Index>(l, singular_values.size());
    for (Index i = 0; i < have; ++i) acc += singular_values(i) * singular_values(i);
    return acc;
}

TuckerBasis hosvd_init_impl(const DenseTensor& x, const MultilinearRank& r) {
    TuckerBasis b;
    b.b1 = leading_left_singular_vectors(unfold(x, 1), r.l1).u;
    b.b2 = leading_left_singular_vectors(unfold(x, 2), r.l2).u;
    b.b3 = leading_left_singular_vectors(unfold(x, 3), r.l3).u;
    return b;
}

// The alternating sweep shared by hooi and mhooi, from a given starting
// point. `x` is 3-way or 4-way.
TuckerBasis hooi_sweeps_from(const DenseTensor& x, const MultilinearRank& r, TuckerBasis b,
                             const HooiOptions& opts) {
    b.fit_trace.clear();
    b.fit_trace.push_back(projected_energy(x, b));

    double prev_obj = b.fit_trace.front();
    for (int sweep = 0; sweep < opts.max_iter; ++sweep) {
        const Eigen::MatrixXd b2_prev = b.b2;

        auto lead1 = leading_left_singular_vectors(unfold(project_others(x, b.b1, b.b2, b.b3, 1), 1), r.l1);
        b.b1 = std::move(lead1.u);
        b.fit_trace.push_back(top_energy(lead1.singular_values, r.l1));

        auto lead2 = leading_left_singular_vectors(unfold(project_others(x, b.b1, b.b2, b.b3, 2), 2), r.l2);
        b.b2 = std::move(lead2.u);
        b.fit_trace.push_back(top_energy(lead2.singular_values, r.l2));

        const Eigen::MatrixXd& b2_for_mode3 = opts.stale_mode2_in_mode3 ? b2_prev : b.b2;
        auto lead3 = leading_left_singular_vectors(
            unfold(project_others(x, b.b1, b2_for_mode3, b.b3, 3), 3), r.l3);
        b.b3 = std::move(lead3.u);
        b.fit_trace.push_back(top_energy(lead3.singular_values, r.l3));

        const double obj = opts.stale_mode2_in_mode3 ? projected_energy(x, b) : b.fit_trace.back();
        if (std::abs(obj - prev_obj) <= opts.tol * std::max(std::abs(obj), 1e-300)) {
            break;
        }
        prev_obj = obj;
    }
    return b;
}

TuckerBasis hooi_sweeps(const DenseTensor& x, const MultilinearRank& r, const HooiOptions& opts) {
    return hooi_sweeps_from(x, r, hosvd_init_impl(x, r), opts);
}

// Rank-(1,1,1) fits have spurious alternating-sweep basins that a single
// start can land in, so the sweep is restarted from every combination of a
// few leading singular vectors per mode (the first combination is the plain
// truncated-HOSVD start) and the best final objective wins. Deterministic:
// fixed start order, strictly-better comparison.
TuckerBasis best_rank1_sweeps(const DenseTensor& x, const HooiOptions& opts) {
    const Index k1 = std::min<Index>(4, x.shape().dim(1));
    const Index k2 = std::min<Index>(4, x.shape().dim(2));
    const Index k3 = std::min<Index>(4, x.shape().dim(3));
    const Eigen::MatrixXd lead1 = leading_left_singular_vectors(unfold(x, 1), k1).u;
    const Eigen::MatrixXd lead2 = leading_left_singular_vectors(unfold(x, 2), k2).u;
    const Eigen::MatrixXd lead3 = leading_left_singular_vectors(unfold(x, 3), k3).u;

    TuckerBasis best;
    double best_obj = -1.0;
    for (Index i = 0; i < k1; ++i) {
        for (Index j = 0; j < k2; ++j) {
            for (Index k = 0; k < k3; ++k) {
                TuckerBasis start;
                start.b1 = lead1.col(i);
                start.b2 = lead2.col(j);
                start.b3 = lead3.col(k);
                TuckerBasis candidate = hooi_sweeps_from(x, {1, 1, 1}, std::move(start), opts);
                const double obj = candidate.fit_trace.back();
                if (obj > best_obj * (1 + 1e-12)) {
                    best_obj = obj;
                    best = std::move(candidate);
                }
            }
        }
    }
    return best;
}

}  // namespace

TuckerBasis hosvd_init(const DenseTensor& x, const MultilinearRank& r) {
    check_field_tensor(x, "hosvd_init");
    check_finite(x, "hosvd_init");
    check_rank(x, r, "hosvd_init");
    TuckerBasis b = hosvd_init_impl(x, r);
    b.mean_field = DenseTensor::zeros(x.shape());
    return b;
}

HooiResult hooi(const DenseTensor& x, const MultilinearRank& r, const HooiOptions& opts) {
    check_field_tensor(x, "hooi");
    check_finite(x, "hooi");
    check_rank(x, r, "hooi");

    HooiResult out;
    if (r.l1 == 1 && r.l2 == 1 && r.l3 == 1) {
        out.basis = best_rank1_sweeps(x, opts);
    } else {
        out.basis = hooi_sweeps(x, r, opts);
    }
    out.basis.mean_field = DenseTensor::zeros(x.shape());
    out.core = tucker_encode(x, out.basis);
    return out;
}

DenseTensor tucker_encode(const DenseTensor& x_star, const TuckerBasis& b) {
    check_field_tensor(x_star, "tucker_encode");
    if (x_star.shape().dim(1) != b.b1.rows() || x_star.shape().dim(2) != b.b2.rows() ||
        x_star.shape().dim(3) != b.b3.rows()) {
        throw DomainError("tucker_encode: sample shape " + x_star.shape().to_string() +
                          " does not match basis");
    }
    return project_others(x_star, b.b1, b.b2, b.b3, 0);
}

DenseTensor tucker_decode(const DenseTensor& s, const TuckerBasis& b) {
    check_field_tensor(s, "tucker_decode");
    if (s.shape().dim(1) != b.b1.cols() || s.shape().dim(2) != b.b2.cols() ||
        s.shape().dim(3) != b.b3.cols()) {
        throw DomainError("tucker_decode: core shape " + s.shape().to_string() +
                          " does not match basis");
    }
    DenseTensor y = mode_product(s, b.b1, 1);
    y = mode_product(y, b.b2, 2);
    return mode_product(y, b.b3, 3);
}

MhooiResult mhooi(std::span<const DenseTensor> snapshots, const MultilinearRank& r,
                  const HooiOptions& opts) {
    if (snapshots.empty()) {
        throw DomainError("mhooi: empty snapshot list");
    }
    for (const auto& t : snapshots) {
        check_field_tensor(t, "mhooi");
        check_finite(t, "mhooi");
        if (t.shape() != snapshots.front().shape()) {
            throw DomainError("mhooi: snapshot shape mismatch: " + t.shape().to_string() +
                              " vs " + snapshots.front().shape().to_string());
        }
    }
    check_rank(snapshots.front(), r, "mhooi");

    const DenseTensor stack = stack_mode4(snapshots);
    MhooiResult out;
    if (r.l1 == 1 && r.l2 == 1 && r.l3 == 1) {
        out.basis = best_rank1_sweeps(stack, opts);
    } else {
        out.basis = hooi_sweeps(stack, r, opts);
    }
    out.basis.mean_field = DenseTensor::zeros(snapshots.front().shape());
    out.cores.reserve(snapshots.size());
    for (const auto& t : snapshots) {
        out.cores.push_back(tucker_encode(t, out.basis));
    }
    return out;
}

Prop1Report verify_prop1(const DenseTensor& x, Index k) {
    check_field_tensor(x, "verify_prop1");
    const Index i_dim = x.shape().dim(3);
    if (k < 1 || k > i_dim) {
        throw DomainError("verify_prop1: k = " + std::to_string(k) + " out of range 1.." +
                          std::to_string(i_dim));
    }
    const Eigen::MatrixXd x3 = unfold(x, 3);

    // Constrained-problem route: eigendecomposition of the Gram matrix.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x3 * x3.transpose());
    if (es.info() != Eigen::Success) {
        throw NumericError("verify_prop1: eigendecomposition failed");
    }
    Eigen::MatrixXd b3(i_dim, k);
    for (Index c = 0; c < k; ++c) {
        b3.col(c) = es.eigenvectors().col(i_dim - 1 - c);  // descending order
    }

    // Classical route: leading left singular vectors.
    const Eigen::MatrixXd e = learn_eof(x3, k).factors;

    Prop1Report report;
    report.projector_distance = (b3 * b3.transpose() - e * e.transpose()).norm();
    return report;
}

Prop2Report verify_prop2(const DenseTensor& x, Index nf1, Index nf2, Index kf, double lx,
                         double ly) {
    check_field_tensor(x, "verify_prop2");
    const Index i_dim = x.shape().dim(3);
    if (nf1 < 1 || nf2 < 1) {
        throw DomainError("verify_prop2: nf1 and nf2 must be positive");
    }
    if (kf < 1 || kf > i_dim) {
        throw DomainError("verify_prop2: kf = " + std::to_string(kf) + " out of range 1.." +
                          std::to_string(i_dim));
    }

    const Eigen::MatrixXcd f1 = build_fourier_matrix(x.shape().dim(1), nf1, lx);
    const Eigen::MatrixXcd f2 = build_fourier_matrix(x.shape().dim(2), nf2, ly);
    const Eigen::MatrixXcd f = kronecker(f2, f1);
    const Eigen::MatrixXd x3 = unfold(x, 3);
    const Eigen::MatrixXcd c3 = x3.cast<std::complex<double>>() * f;

    // Real constrained optimum: for a real orthonormal vertical basis B,
    // ||B^T C||_F^2 = ||B^T [Re C, Im C]||_F^2, so the leading left singular
    // vectors of the concatenation solve the weighted problem.
    Eigen::MatrixXd c_real(c3.rows(), 2 * c3.cols());
    c_real << c3.real(), c3.imag();
    const Eigen::MatrixXd b3 = leading_left_singular_vectors(c_real, kf).u;

    const Eigen::MatrixXd e = learn_eof(x3, kf).factors;

    Prop2Report report;
    report.projector_distance = (b3 * b3.transpose() - e * e.transpose()).norm();

    // Residual of the fixed-horizontal-factor model with the core solved by
    // least squares: || X3 - B B^T X3 (F^T)^+ F^T ||_F^2.
    const Eigen::MatrixXcd x3c = x3.cast<std::complex<double>>();
    const Eigen::MatrixXcd ft = f.transpose();
    const Eigen::MatrixXcd ft_pinv = pinv(ft);
    const auto objective = [&](const Eigen::MatrixXd& basis) {
        const Eigen::MatrixXcd bc = basis.cast<std::complex<double>>();
        const Eigen::MatrixXcd core3 = bc.adjoint() * x3c * ft_pinv;
        return (x3c - bc * core3 * ft).squaredNorm();
    };
    report.constrained_objective = objective(b3);
    report.classical_objective = objective(e);
    return report;
}

}  // namespace ssf
