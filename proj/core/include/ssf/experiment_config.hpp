// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ssf/synth.hpp"
#include "ssf/tucker.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ssf {

struct HooiSpec {
    Index l1 = 8, l2 = 8, l3 = 10;
};

struct EofSpec {
    Index k = 2;
};

struct KsvdSpec {
    Index z = 320;
    int t = 2;
    int max_iter = 15;
};

struct FourierEofSpec {
    Index nf1 = 8, nf2 = 8, kf = 10;
    // Periodicities default to the grid lengths (orthogonal columns).
    std::optional<double> lx;
    std::optional<double> ly;
};

/// One benchmark method with its hyper-parameters.
struct MethodSpec {
    std::variant<HooiSpec, EofSpec, KsvdSpec, FourierEofSpec> spec;

    [[nodiscard]] std::string name() const;   // "hooi", "eof", "ksvd", "fourier_eof"
    [[nodiscard]] std::string label() const;  // name plus hyper-parameters, e.g. "hooi[8,8,10]"
};

/// Budget ladders for the sweep runner, plus the target threshold on the
/// normalized RMSE used for the minimal-budget search.
struct SweepSpec {
    std::vector<std::array<Index, 3>> hooi_ranks = {
        {2, 2, 3}, {3, 3, 4}, {4, 4, 6}, {6, 6, 8}, {8, 8, 10}};
    std::vector<std::array<Index, 3>> fourier_sizes = {
        {2, 2, 3}, {3, 3, 4}, {4, 4, 6}, {6, 6, 8}, {8, 8, 10}};
    std::vector<Index> eof_ks = {1, 2, 3};
    std::vector<int> ksvd_ts = {1, 2, 3};
    Index ksvd_z = 320;
    int ksvd_max_iter = 12;
    double target_rmse_normalized = 0.06;
};

struct MultiseasonSpec {
    int blocks = 4;
    int spacing_days = 91;
    int train_per_block = 3;
    int test_per_block = 7;
    std::array<Index, 3> rank = {6, 6, 8};
    SsfGrid grid{13, 13, 37, 8.0, 8.0, 55.0};
};

struct ExperimentConfig {
    SsfGrid grid;
    int days = 30;
    GeneratorParams generator;
    std::uint64_t seed = 1;
    std::vector<int> train_days = {1};
    std::vector<int> test_days;  // empty: every non-training day
    std::vector<MethodSpec> methods;

    double hooi_tol = 1e-8;
    int hooi_max_iter = 100;
    bool strict_paper = false;  // printed stale-factor variant of the mode-3 update
    int timing_repeats = 5;

    SweepSpec sweep;
    MultiseasonSpec multiseason;
    std::string out_dir = "out";

    /// The four default methods at the Case-I budgets.
    static std::vector<MethodSpec> default_methods();
};

}  // namespace ssf
