// SPDX-License-Identifier: Apache-2.0
#include "ssf/ksvd.hpp"

#include "ssf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

namespace ssf {

namespace {

constexpr double kAtomNormTol = 1e-10;
constexpr double kResidualStop = 1e-12;

void check_unit_atoms(const Eigen::MatrixXd& dict) {
    for (Eigen::Index z = 0; z < dict.cols(); ++z) {
        if (std::abs(dict.col(z).norm() - 1.0) > kAtomNormTol) {
            throw DomainError("omp: atom " + std::to_string(z) + " is not unit-norm");
        }
    }
}

// Core OMP loop; assumes atoms are unit-norm and 1 <= t <= min(I, Z).
std::vector<std::pair<Index, double>> omp_unchecked(const Eigen::VectorXd& x,
                                                    const Eigen::MatrixXd& dict, int t) {
    Eigen::VectorXd residual = x;
    double rnorm = residual.norm();
    if (rnorm == 0.0) return {};

    const Eigen::Index zdim = dict.cols();
    std::vector<Index> selected;
    std::vector<char> used(static_cast<size_t>(zdim), 0);
    Eigen::MatrixXd sub(x.size(), t);
    Eigen::VectorXd gamma;

    for (int step = 0; step < t; ++step) {
        Eigen::VectorXd corr = dict.transpose() * residual;
        Eigen::Index arg = -1;
        double best = -1.0;
        for (Eigen::Index z = 0; z < zdim; ++z) {
            if (used[static_cast<size_t>(z)]) continue;
            const double mag = std::abs(corr(z));
            if (mag > best) {  // strict, so ties go to the lowest index
                best = mag;
                arg = z;
            }
        }
        if (arg < 0 || best <= 1e-13 * rnorm) break;
        used[static_cast<size_t>(arg)] = 1;
        selected.push_back(arg);
        sub.col(step) = dict.col(arg);
        auto sel = sub.leftCols(step + 1);
        gamma = sel.householderQr().solve(x);
        residual = x - sel * gamma;
        rnorm = residual.norm();
        if (rnorm <= kResidualStop) break;
    }

    std::vector<std::pair<Index, double>> out;
    out.reserve(selected.size());
    for (size_t i = 0; i < selected.size(); ++i) {
        out.emplace_back(selected[i], gamma(static_cast<Eigen::Index>(i)));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

double column_residual_norm2(const Eigen::VectorXd& x, const Eigen::MatrixXd& dict,
                             const std::vector<std::pair<Index, double>>& entries) {
    Eigen::VectorXd r = x;
    for (const auto& [idx, val] : entries) {
        r -= dict.col(idx) * val;
    }
    return r.squaredNorm();
}

void fix_atom_sign(Eigen::VectorXd& atom, Eigen::VectorXd& coeffs) {
    Eigen::Index arg = 0;
    atom.cwiseAbs().maxCoeff(&arg);
    if (atom(arg) < 0.0) {
        atom = -atom;
        coeffs = -coeffs;
    }
}

Eigen::MatrixXd initial_dictionary(const Eigen::MatrixXd& x, Index z, const KsvdOptions& opts,
                                   std::uint64_t seed) {
    const Index i_dim = x.rows();
    Eigen::MatrixXd dict(i_dim, z);
    SplitMix64 rng(derive_stream(seed, 0x4B53564Dull));
    if (opts.initial_dictionary) {
        const Eigen::MatrixXd& init = *opts.initial_dictionary;
        if (init.rows() != i_dim || init.cols() != z) {
            throw DomainError("ksvd_learn: initial dictionary must be " + std::to_string(i_dim) +
                              "x" + std::to_string(z));
        }
        dict = init;
    } else {
        // z distinct training columns (wrapping with replacement when J < z).
        const Index j_dim = x.cols();
        std::vector<Index> order(static_cast<size_t>(j_dim));
        std::iota(order.begin(), order.end(), Index{0});
        for (Index k = j_dim - 1; k > 0; --k) {
            const auto swap_with = static_cast<Index>(rng.below(static_cast<std::uint64_t>(k + 1)));
            std::swap(order[static_cast<size_t>(k)], order[static_cast<size_t>(swap_with)]);
        }
        for (Index c = 0; c < z; ++c) {
            const Index src = c < j_dim ? order[static_cast<size_t>(c)]
                                        : static_cast<Index>(rng.below(static_cast<std::uint64_t>(j_dim)));
            dict.col(c) = x.col(src);
        }
    }
    for (Index c = 0; c < z; ++c) {
        double norm = dict.col(c).norm();
        while (norm <= 1e-300) {
            for (Index r = 0; r < i_dim; ++r) dict(r, c) = rng.normal();
            norm = dict.col(c).norm();
        }
        dict.col(c) /= norm;
        Eigen::VectorXd atom = dict.col(c);
        Eigen::VectorXd dummy = Eigen::VectorXd::Zero(0);
        fix_atom_sign(atom, dummy);
        dict.col(c) = atom;
    }
    return dict;
}

// Atom-wise rank-1 updates on the coding residual; coefficients of each
// atom's support are co-updated, and code values/residual are kept in sync.
void update_dictionary(const Eigen::MatrixXd& x, Eigen::MatrixXd& dict, SparseCode& code,
                       Eigen::MatrixXd& residual) {
    const Index zdim = dict.cols();
    const Index j_dim = x.cols();
    std::vector<std::vector<std::pair<Index, size_t>>> usage(static_cast<size_t>(zdim));
    for (Index j = 0; j < j_dim; ++j) {
        const auto& col = code.columns[static_cast<size_t>(j)];
        for (size_t pos = 0; pos < col.size(); ++pos) {
            usage[static_cast<size_t>(col[pos].first)].emplace_back(j, pos);
        }
    }

    std::vector<char> consumed(static_cast<size_t>(j_dim), 0);
    for (Index z = 0; z < zdim; ++z) {
        const auto& users = usage[static_cast<size_t>(z)];
        if (users.empty()) {
            // Replace with the worst-represented training column.
            Index worst = -1;
            double worst_norm = 1e-12;
            for (Index j = 0; j < j_dim; ++j) {
                if (consumed[static_cast<size_t>(j)]) continue;
                const double n = residual.col(j).norm();
                if (n > worst_norm) {
                    worst_norm = n;
                    worst = j;
                }
            }
            if (worst >= 0 && x.col(worst).norm() > 1e-300) {
                consumed[static_cast<size_t>(worst)] = 1;
                Eigen::VectorXd atom = x.col(worst) / x.col(worst).norm();
                Eigen::VectorXd dummy = Eigen::VectorXd::Zero(0);
                fix_atom_sign(atom, dummy);
                dict.col(z) = atom;
            }
            continue;
        }

        Eigen::MatrixXd e(x.rows(), static_cast<Eigen::Index>(users.size()));
        for (size_t u = 0; u < users.size(); ++u) {
            const auto [j, pos] = users[u];
            const double val = code.columns[static_cast<size_t>(j)][pos].second;
            e.col(static_cast<Eigen::Index>(u)) = residual.col(j) + dict.col(z) * val;
        }

        // Rank-1 fit of e seeded at the current atom; each alternation is a
        // least-squares improvement, so the objective cannot increase.
        Eigen::VectorXd atom = dict.col(z);
        Eigen::VectorXd coeffs;
        for (int it = 0; it < 200; ++it) {
            coeffs = e.transpose() * atom;
            Eigen::VectorXd ec = e * coeffs;
            const double n = ec.norm();
            if (n <= 1e-300) break;
            Eigen::VectorXd next = ec / n;
            const double delta = (next - atom).norm();
            atom = next;
            if (delta < 1e-12) break;
        }
        coeffs = e.transpose() * atom;
        fix_atom_sign(atom, coeffs);

        dict.col(z) = atom;
        for (size_t u = 0; u < users.size(); ++u) {
            const auto [j, pos] = users[u];
            code.columns[static_cast<size_t>(j)][pos].second = coeffs(static_cast<Eigen::Index>(u));
            residual.col(j) =
                e.col(static_cast<Eigen::Index>(u)) - atom * coeffs(static_cast<Eigen::Index>(u));
        }
    }
}

}  // namespace

Eigen::MatrixXd SparseCode::to_dense() const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, cols());
    for (Index j = 0; j < cols(); ++j) {
        for (const auto& [idx, val] : columns[static_cast<size_t>(j)]) {
            out(idx, j) = val;
        }
    }
    return out;
}

std::vector<std::pair<Index, double>> omp(const Eigen::VectorXd& x, const Eigen::MatrixXd& dict,
                                          int t) {
    if (t < 1 || t > std::min(dict.rows(), dict.cols())) {
        throw DomainError("omp: sparsity t = " + std::to_string(t) + " out of range 1..min(" +
                          std::to_string(dict.rows()) + "," + std::to_string(dict.cols()) + ")");
    }
    if (x.size() != dict.rows()) {
        throw DomainError("omp: signal length does not match dictionary rows");
    }
    check_unit_atoms(dict);
    return omp_unchecked(x, dict, t);
}

std::pair<KsvdDictionary, SparseCode> ksvd_learn(const Eigen::MatrixXd& x, Index z, int t,
                                                 const KsvdOptions& opts, std::uint64_t seed) {
    const Index i_dim = x.rows();
    const Index j_dim = x.cols();
    if (t < 1 || t > i_dim) {
        throw DomainError("ksvd_learn: sparsity t = " + std::to_string(t) + " out of range 1.." +
                          std::to_string(i_dim));
    }
    if (z < i_dim) {
        throw DomainError("ksvd_learn: z = " + std::to_string(z) +
                          " must be >= signal dimension " + std::to_string(i_dim));
    }
    if (j_dim < 1) {
        throw DomainError("ksvd_learn: no training columns");
    }
    if (j_dim < z) {
        std::cerr << "ksvd_learn: warning: only " << j_dim << " training columns for " << z
                  << " atoms\n";
    }

    Eigen::MatrixXd dict = initial_dictionary(x, z, opts, seed);

    SparseCode code;
    code.rows = z;
    code.columns.resize(static_cast<size_t>(j_dim));

    std::vector<double> trace;
    Eigen::MatrixXd residual(i_dim, j_dim);
    double prev_obj = std::numeric_limits<double>::infinity();

    const int max_iter = std::max(1, opts.max_iter);
    for (int iter = 0; iter < max_iter; ++iter) {
        // Sparse coding; keeps the previous code for a column when it beats
        // the fresh OMP fit under the current dictionary, so the recorded
        // objective sequence is non-increasing.
        for (Index j = 0; j < j_dim; ++j) {
            auto fresh = omp_unchecked(x.col(j), dict, t);
            auto& current = code.columns[static_cast<size_t>(j)];
            if (iter > 0) {
                const double keep = column_residual_norm2(x.col(j), dict, current);
                const double take = column_residual_norm2(x.col(j), dict, fresh);
                if (keep < take) continue;
            }
            current = std::move(fresh);
        }

        residual = x;
        for (Index j = 0; j < j_dim; ++j) {
            for (const auto& [idx, val] : code.columns[static_cast<size_t>(j)]) {
                residual.col(j) -= dict.col(idx) * val;
            }
        }
        const double obj = residual.squaredNorm();
        trace.push_back(obj);

        if (iter > 0 && prev_obj - obj <= opts.rel_improvement_tol *
                                              std::max(prev_obj, 1e-300)) {
            break;
        }
        prev_obj = obj;
        if (iter + 1 == max_iter) break;

        update_dictionary(x, dict, code, residual);
    }

    KsvdDictionary d;
    d.atoms = std::move(dict);
    d.sparsity = t;
    d.train_objective = std::move(trace);
    return {std::move(d), std::move(code)};
}

SparseCode ksvd_encode(const Eigen::MatrixXd& x_star, const KsvdDictionary& d) {
    if (x_star.rows() != d.atoms.rows()) {
        throw DomainError("ksvd_encode: sample has " + std::to_string(x_star.rows()) +
                          " rows, dictionary expects " + std::to_string(d.atoms.rows()));
    }
    if (d.sparsity < 1 || d.sparsity > std::min(d.atoms.rows(), d.atoms.cols())) {
        throw DomainError("ksvd_encode: dictionary sparsity out of range");
    }
    check_unit_atoms(d.atoms);
    SparseCode code;
    code.rows = d.atoms.cols();
    code.columns.resize(static_cast<size_t>(x_star.cols()));
    for (Eigen::Index j = 0; j < x_star.cols(); ++j) {
        code.columns[static_cast<size_t>(j)] = omp_unchecked(x_star.col(j), d.atoms, d.sparsity);
    }
    return code;
}

Eigen::MatrixXd ksvd_decode(const SparseCode& code, const KsvdDictionary& d) {
    if (code.rows != d.atoms.cols()) {
        throw DomainError("ksvd_decode: code has " + std::to_string(code.rows) +
                          " rows, dictionary has " + std::to_string(d.atoms.cols()) + " atoms");
    }
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d.atoms.rows(), code.cols());
    for (Index j = 0; j < code.cols(); ++j) {
        for (const auto& [idx, val] : code.columns[static_cast<size_t>(j)]) {
            if (idx < 0 || idx >= code.rows) {
                throw DomainError("ksvd_decode: atom index out of range");
            }
            out.col(j) += d.atoms.col(idx) * val;
        }
    }
    return out;
}

}  // namespace ssf
