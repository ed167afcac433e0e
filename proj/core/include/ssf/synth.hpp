// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ssf/tensor.hpp"

#include <cstdint>
#include <vector>

namespace ssf {

/// Regular sampling grid: m x n horizontal points, i depth points.
struct SsfGrid {
    Index m = 20;
    Index n = 20;
    Index i = 300;
    double dx_km = 8.0;
    double dy_km = 8.0;
    double dz_m = 10.0;
};

/// One day's 3-way sound-speed field (m/s), indexed (x, y, depth).
struct SsfSnapshot {
    SsfGrid grid;
    int day = 0;
    DenseTensor field{Shape({1})};
};

/// Knobs for the synthetic field generator. Defaults are tuned so the
/// generated datasets satisfy the documented structure gates (low-rank
/// energy concentration, upper-ocean variance, monotone temporal
/// decorrelation).
struct GeneratorParams {
    // Drifting 3D Gaussian eddy anomaly.
    double eddy_amplitude = 3.0;          // peak anomaly, m/s (sign is seeded)
    double eddy_radius_km = 50.0;         // horizontal scale
    double eddy_depth_m = 250.0;          // anomaly core depth
    double eddy_vertical_scale_m = 280.0;
    double eddy_orbit_radius_km = 25.0;   // slow drift along a circular track
    double eddy_orbit_period_days = 640.0;

    // Smooth low-rank perturbation: separable modes with AR(1) weights.
    int perturbation_modes = 5;
    double mode_amplitude = 2.6;          // leading mode, m/s; decays per mode
    double ar_coefficient = 0.97;         // memory longer than a one-month window
    double ar_innovation = 0.16;          // innovation std relative to mode scale
    double seasonal_period_days = 364.0;
    double seasonal_amplitude = 0.5;      // relative seasonal swing of mode weights
    double seasonal_phase_shift = 0.7;    // seasonal drift of vertical structure, rad

    double noise_sigma = 0.03;            // white noise, m/s
};

/// Canonical deep-water background profile:
/// c(z) = 1500 * (1 + eps * (eta - 1 + exp(-eta))), eta = 2 (z - 1300) / 1300,
/// eps = 0.00737. Exactly 1500 m/s at the 1300 m channel axis.
double munk_profile(double z_m);

/// Deterministic per (seed, day); snapshots for distinct days can be
/// generated independently and in any order.
SsfSnapshot generate_snapshot(const SsfGrid& grid, int day, const GeneratorParams& params,
                              std::uint64_t seed);

struct SsfDataset {
    std::vector<SsfSnapshot> snapshots;       // ordered by day
    DenseTensor mean_field{Shape({1})};       // pointwise mean over training snapshots
    std::vector<int> train_days;
    std::vector<int> test_days;

    [[nodiscard]] const SsfSnapshot& by_day(int day) const;
    /// Snapshot minus the training mean field.
    [[nodiscard]] DenseTensor perturbation(int day) const;
};

/// Days 1..days with the first day as the training split.
SsfDataset build_dataset(const SsfGrid& grid, int days, const GeneratorParams& params,
                         std::uint64_t seed);

/// Widely spaced blocks (default four, ~seasonal spacing): the first
/// `train_per_block` days of each block train, the following
/// `test_per_block` days test.
SsfDataset build_multiseason_dataset(const SsfGrid& grid, const GeneratorParams& params,
                                     std::uint64_t seed, int blocks = 4, int spacing_days = 91,
                                     int train_per_block = 3, int test_per_block = 7);

}  // namespace ssf
