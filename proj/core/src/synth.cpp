// SPDX-License-Identifier: Apache-2.0
#include "ssf/synth.hpp"

#include "ssf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ssf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Stream tags (arbitrary distinct constants).
constexpr std::uint64_t kTagEddy = 0xE0D1;
constexpr std::uint64_t kTagModeShape = 0x40DE;
constexpr std::uint64_t kTagModeWeights = 0xA7;
constexpr std::uint64_t kTagNoise = 0x401E;

struct EddyTrack {
    double sign = 1.0;
    double cx0_km = 0.0;
    double cy0_km = 0.0;
    double phase = 0.0;
};

struct ModeShape {
    double amplitude = 0.0;
    double kx = 0.0, phase_x = 0.0;
    double ky = 0.0, phase_y = 0.0;
    double decay_m = 0.0;        // vertical e-folding
    double wavelength_m = 0.0;   // vertical oscillation
    double phase_z = 0.0;
    double weight_bias = 0.0;
    double seasonal_phase = 0.0;
};

EddyTrack draw_eddy(const SsfGrid& grid, std::uint64_t seed) {
    SplitMix64 rng(derive_stream(seed, kTagEddy));
    EddyTrack e;
    e.sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const double lx = static_cast<double>(grid.m) * grid.dx_km;
    const double ly = static_cast<double>(grid.n) * grid.dy_km;
    e.cx0_km = 0.5 * lx + (rng.uniform() - 0.5) * 0.1 * lx;
    e.cy0_km = 0.5 * ly + (rng.uniform() - 0.5) * 0.1 * ly;
    e.phase = rng.uniform() * kTwoPi;
    return e;
}

std::vector<ModeShape> draw_modes(const GeneratorParams& p, std::uint64_t seed) {
    SplitMix64 rng(derive_stream(seed, kTagModeShape));
    std::vector<ModeShape> modes(static_cast<size_t>(std::max(0, p.perturbation_modes)));
    double amplitude = p.mode_amplitude;
    for (auto& m : modes) {
        m.amplitude = amplitude;
        amplitude *= 0.75;
        // Non-integer horizontal wavenumbers so the patterns are not plain
        // grid-periodic harmonics.
        m.kx = 0.6 + 2.2 * rng.uniform();
        m.ky = 0.6 + 2.2 * rng.uniform();
        m.phase_x = rng.uniform() * kTwoPi;
        m.phase_y = rng.uniform() * kTwoPi;
        m.decay_m = 350.0 + 850.0 * rng.uniform();
        m.wavelength_m = 900.0 + 2100.0 * rng.uniform();
        m.phase_z = rng.uniform() * kTwoPi;
        // Positive bias floor: every mode is visible in any single training
        // snapshot, whatever the seasonal phase.
        m.weight_bias = 0.75 + 0.5 * rng.uniform();
        m.seasonal_phase = rng.uniform() * kTwoPi;
    }
    return modes;
}

// AR(1) weight history for one mode, evaluated at `day`. The recursion is
// replayed from day 1 so any day can be generated independently. Day 1 is
// the deterministic reference state; stochastic deviation accumulates from
// day 2 on, so later days drift away from (and are never systematically
// easier than) the reference.
double mode_weight(const GeneratorParams& p, const ModeShape& mode, int mode_index, int day,
                   std::uint64_t seed) {
    SplitMix64 rng(derive_stream(seed, kTagModeWeights + 1000003ull * static_cast<std::uint64_t>(mode_index)));
    double deviation = 0.0;
    for (int d = 2; d <= day; ++d) {
        deviation = p.ar_coefficient * deviation + p.ar_innovation * rng.normal();
    }
    const double seasonal =
        1.0 + p.seasonal_amplitude * std::sin(kTwoPi * static_cast<double>(day) /
                                                  p.seasonal_period_days +
                                              mode.seasonal_phase);
    return mode.weight_bias * seasonal + deviation;
}

}  // namespace

double munk_profile(double z_m) {
    if (z_m < 0.0) {
        throw DomainError("munk_profile: depth must be nonnegative");
    }
    constexpr double eps = 0.00737;
    constexpr double z_axis = 1300.0;
    const double eta = 2.0 * (z_m - z_axis) / z_axis;
    return 1500.0 * (1.0 + eps * (eta - 1.0 + std::exp(-eta)));
}

SsfSnapshot generate_snapshot(const SsfGrid& grid, int day, const GeneratorParams& params,
                              std::uint64_t seed) {
    if (grid.m < 1 || grid.n < 1 || grid.i < 1 || grid.dx_km <= 0 || grid.dy_km <= 0 ||
        grid.dz_m <= 0) {
        throw DomainError("generate_snapshot: invalid grid");
    }
    if (day < 1) {
        throw DomainError("generate_snapshot: day must be >= 1");
    }

    const Index m_dim = grid.m;
    const Index n_dim = grid.n;
    const Index i_dim = grid.i;
    DenseTensor field{Shape({m_dim, n_dim, i_dim})};

    const EddyTrack eddy = draw_eddy(grid, seed);
    const std::vector<ModeShape> modes = draw_modes(params, seed);

    // Day-dependent pieces.
    const double orbit = kTwoPi * static_cast<double>(day) / params.eddy_orbit_period_days;
    const double eddy_cx = eddy.cx0_km + params.eddy_orbit_radius_km * std::cos(orbit + eddy.phase);
    const double eddy_cy = eddy.cy0_km + params.eddy_orbit_radius_km * std::sin(orbit + eddy.phase);
    const double eddy_peak = eddy.sign * params.eddy_amplitude;

    std::vector<double> weights(modes.size());
    for (size_t k = 0; k < modes.size(); ++k) {
        weights[k] = mode_weight(params, modes[k], static_cast<int>(k), day, seed);
    }
    // Anchored at a seasonal extremum so profiles drift slowly inside a
    // one-month window but differ strongly between windows a season apart.
    const double season_shift =
        params.seasonal_phase_shift *
        std::cos(kTwoPi * static_cast<double>(day) / params.seasonal_period_days);

    // Per-depth profiles.
    std::vector<double> background(static_cast<size_t>(i_dim));
    std::vector<double> eddy_z(static_cast<size_t>(i_dim));
    std::vector<std::vector<double>> mode_z(modes.size(),
                                            std::vector<double>(static_cast<size_t>(i_dim)));
    for (Index iz = 0; iz < i_dim; ++iz) {
        const double z = static_cast<double>(iz) * grid.dz_m;
        background[static_cast<size_t>(iz)] = munk_profile(z);
        const double dz = (z - params.eddy_depth_m) / params.eddy_vertical_scale_m;
        eddy_z[static_cast<size_t>(iz)] = std::exp(-0.5 * dz * dz);
        for (size_t k = 0; k < modes.size(); ++k) {
            const auto& md = modes[k];
            mode_z[k][static_cast<size_t>(iz)] =
                std::exp(-z / md.decay_m) *
                std::cos(kTwoPi * z / md.wavelength_m + md.phase_z + season_shift);
        }
    }

    // Per-axis horizontal patterns.
    const double lx = static_cast<double>(m_dim) * grid.dx_km;
    const double ly = static_cast<double>(n_dim) * grid.dy_km;
    std::vector<std::vector<double>> mode_x(modes.size(), std::vector<double>(static_cast<size_t>(m_dim)));
    std::vector<std::vector<double>> mode_y(modes.size(), std::vector<double>(static_cast<size_t>(n_dim)));
    std::vector<double> eddy_x(static_cast<size_t>(m_dim));
    std::vector<double> eddy_y(static_cast<size_t>(n_dim));
    for (Index ix = 0; ix < m_dim; ++ix) {
        const double x = static_cast<double>(ix) * grid.dx_km;
        const double dx = (x - eddy_cx) / params.eddy_radius_km;
        eddy_x[static_cast<size_t>(ix)] = std::exp(-0.5 * dx * dx);
        for (size_t k = 0; k < modes.size(); ++k) {
            mode_x[k][static_cast<size_t>(ix)] =
                std::cos(kTwoPi * modes[k].kx * x / lx + modes[k].phase_x);
        }
    }
    for (Index iy = 0; iy < n_dim; ++iy) {
        const double y = static_cast<double>(iy) * grid.dy_km;
        const double dy = (y - eddy_cy) / params.eddy_radius_km;
        eddy_y[static_cast<size_t>(iy)] = std::exp(-0.5 * dy * dy);
        for (size_t k = 0; k < modes.size(); ++k) {
            mode_y[k][static_cast<size_t>(iy)] =
                std::cos(kTwoPi * modes[k].ky * y / ly + modes[k].phase_y);
        }
    }

    SplitMix64 noise(derive_stream(seed, kTagNoise + 0x9E37ull * static_cast<std::uint64_t>(day)));
    double* dst = field.data().data();
    for (Index iz = 0; iz < i_dim; ++iz) {
        for (Index iy = 0; iy < n_dim; ++iy) {
            for (Index ix = 0; ix < m_dim; ++ix) {
                double v = background[static_cast<size_t>(iz)];
                v += eddy_peak * eddy_x[static_cast<size_t>(ix)] * eddy_y[static_cast<size_t>(iy)] *
                     eddy_z[static_cast<size_t>(iz)];
                for (size_t k = 0; k < modes.size(); ++k) {
                    v += modes[k].amplitude * weights[k] * mode_x[k][static_cast<size_t>(ix)] *
                         mode_y[k][static_cast<size_t>(iy)] * mode_z[k][static_cast<size_t>(iz)];
                }
                if (params.noise_sigma > 0.0) {
                    v += params.noise_sigma * noise.normal();
                }
                *dst++ = v;
            }
        }
    }

    for (double v : field.data()) {
        if (!(v >= 1400.0 && v <= 1600.0)) {
            throw NumericError("generate_snapshot: field left the physical range [1400, 1600] m/s;"
                               " check generator parameters");
        }
    }

    SsfSnapshot snap;
    snap.grid = grid;
    snap.day = day;
    snap.field = std::move(field);
    return snap;
}

const SsfSnapshot& SsfDataset::by_day(int day) const {
    for (const auto& s : snapshots) {
        if (s.day == day) return s;
    }
    throw DomainError("SsfDataset: no snapshot for day " + std::to_string(day));
}

DenseTensor SsfDataset::perturbation(int day) const {
    const SsfSnapshot& s = by_day(day);
    DenseTensor out = s.field;
    for (size_t k = 0; k < out.data().size(); ++k) {
        out.data()[k] -= mean_field.data()[k];
    }
    return out;
}

namespace {

DenseTensor training_mean(const std::vector<SsfSnapshot>& snapshots,
                          const std::vector<int>& train_days) {
    DenseTensor mean = DenseTensor::zeros(snapshots.front().field.shape());
    for (int day : train_days) {
        for (const auto& s : snapshots) {
            if (s.day == day) {
                for (size_t k = 0; k < mean.data().size(); ++k) {
                    mean.data()[k] += s.field.data()[k];
                }
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(train_days.size());
    for (double& v : mean.data()) v *= inv;
    return mean;
}

}  // namespace

SsfDataset build_dataset(const SsfGrid& grid, int days, const GeneratorParams& params,
                         std::uint64_t seed) {
    if (days < 2) {
        throw DomainError("build_dataset: need at least 2 days");
    }
    SsfDataset ds;
    ds.snapshots.reserve(static_cast<size_t>(days));
    for (int d = 1; d <= days; ++d) {
        ds.snapshots.push_back(generate_snapshot(grid, d, params, seed));
    }
    ds.train_days = {1};
    for (int d = 2; d <= days; ++d) ds.test_days.push_back(d);
    ds.mean_field = training_mean(ds.snapshots, ds.train_days);
    return ds;
}

SsfDataset build_multiseason_dataset(const SsfGrid& grid, const GeneratorParams& params,
                                     std::uint64_t seed, int blocks, int spacing_days,
                                     int train_per_block, int test_per_block) {
    if (blocks < 1 || train_per_block < 1 || test_per_block < 1 || spacing_days < 1) {
        throw DomainError("build_multiseason_dataset: invalid block layout");
    }
    SsfDataset ds;
    for (int b = 0; b < blocks; ++b) {
        const int start = 1 + b * spacing_days;
        for (int k = 0; k < train_per_block + test_per_block; ++k) {
            const int day = start + k;
            ds.snapshots.push_back(generate_snapshot(grid, day, params, seed));
            if (k < train_per_block) {
                ds.train_days.push_back(day);
            } else {
                ds.test_days.push_back(day);
            }
        }
    }
    ds.mean_field = training_mean(ds.snapshots, ds.train_days);
    return ds;
}

}  // namespace ssf
