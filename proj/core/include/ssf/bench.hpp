// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ssf/experiment_config.hpp"
#include "ssf/io.hpp"
#include "ssf/synth.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace ssf {

/// Reconstruction error (1/I) * ||x - x_hat||_F, I = number of horizontal
/// slices (the third dimension).
double rmse_eq27(const DenseTensor& x, const DenseTensor& x_hat);

/// Alternate metric ||x - x_hat||_F / sqrt(M*N*I), in m/s per grid point.
double rmse_normalized(const DenseTensor& x, const DenseTensor& x_hat);

/// Stored coefficients per snapshot for a method's hyper-parameters:
/// hooi L1*L2*L3, eof K*M*N, ksvd T*M*N, fourier_eof NF1*NF2*KF.
long long coefficient_count(const MethodSpec& method, const SsfGrid& grid);

/// Per-snapshot representation coefficients, tagged by basis family, with
/// the field shape needed to reassemble the tensor.
struct Coefficients {
    std::variant<Eigen::MatrixXd, SparseCode, Eigen::MatrixXcd, DenseTensor> value;
    Shape field_shape{std::vector<Index>{1}};
};

struct TrainOptions {
    double hooi_tol = 1e-8;
    int hooi_max_iter = 100;
    bool strict_paper = false;
    std::uint64_t seed = 1;
};

/// Learns a basis from the dataset's training split. All pipelines center
/// by the training depth-profile mean; the mean travels with the basis.
AnyBasis train_method(const MethodSpec& method, const SsfDataset& dataset,
                      const TrainOptions& opts);

Coefficients encode_with(const AnyBasis& basis, const DenseTensor& field);
DenseTensor decode_with(const AnyBasis& basis, const Coefficients& coeffs);

struct ReportRow {
    std::string method;
    int day = 0;
    std::string split;  // "train", "test", "timing"
    double rmse_eq27 = std::numeric_limits<double>::quiet_NaN();
    double rmse_normalized = std::numeric_limits<double>::quiet_NaN();
    long long coeff_count = 0;
    double train_s = 0.0;
    double encode_s = 0.0;
    double decode_s = 0.0;
    std::uint64_t seed = 0;
    bool failed = false;
};

struct ExperimentReport {
    std::vector<ReportRow> rows;

    static std::string csv_header();
    [[nodiscard]] std::string to_csv() const;
};

/// Equal-budget protocol: every method learns on the training split and
/// reconstructs every snapshot. Timing columns are written as zero so the
/// CSV is byte-stable; use run_timing for wall-clock measurements.
ExperimentReport run_compare(const ExperimentConfig& config);

struct SweepCurve {
    std::string family;  // "hooi", "eof", "ksvd", "fourier_eof"
    std::vector<std::pair<long long, double>> points;  // (budget, mean test normalized RMSE)
    /// Smallest swept budget whose mean test normalized RMSE meets the
    /// target; +infinity when no swept budget reaches it.
    double min_budget = std::numeric_limits<double>::infinity();
};

struct SweepOutcome {
    ExperimentReport report;
    std::vector<SweepCurve> curves;
    double target_rmse_normalized = 0.0;

    [[nodiscard]] std::string summary_csv() const;
};

/// Budget ladder per method family; reports (budget, mean test RMSE) curves
/// and the minimal budget reaching the target threshold.
SweepOutcome run_budget_sweep(const ExperimentConfig& config);

/// Multi-block protocol: joint factors from every block's training days
/// versus single-block factors from each block's first day, all evaluated
/// on every block's test week. Methods are labeled "mhooi[...]" and
/// "hooi[...]@block<b>".
ExperimentReport run_multiseason(const ExperimentConfig& config);

struct MethodTiming {
    std::string method;
    std::vector<double> train_reps;
    std::vector<double> encode_reps;
    std::vector<double> decode_reps;
};

struct TimingOutcome {
    ExperimentReport report;  // medians, one row per method
    std::vector<MethodTiming> details;
};

/// Wall-clock per phase per method: warmup excluded, median of
/// config.timing_repeats (>= 2) repeats.
TimingOutcome run_timing(const ExperimentConfig& config);

/// Dataset assembly honoring the config's split (used by every runner).
SsfDataset build_config_dataset(const ExperimentConfig& config);

}  // namespace ssf
