// SPDX-License-Identifier: Apache-2.0
#include "ssf/synth.hpp"

#include "ssf/linalg.hpp"
#include "ssf/tensor.hpp"
#include "support/test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace ssf;
using namespace ssf::testing;

TEST_CASE("munk profile") {
    CHECK(munk_profile(1300.0) == 1500.0);  // channel axis, exactly

    // Independent evaluation of the closed form in extended precision.
    const long double eta0 = 2.0L * (0.0L - 1300.0L) / 1300.0L;
    const long double c0 =
        1500.0L * (1.0L + 0.00737L * (eta0 - 1.0L + std::exp(-eta0)));
    CHECK(munk_profile(0.0) == doctest::Approx(static_cast<double>(c0)).epsilon(1e-14));
    CHECK(munk_profile(0.0) == doctest::Approx(1548.5210151737).epsilon(1e-10));

    // Speed increases with depth below the axis.
    CHECK(munk_profile(2000.0) < munk_profile(2500.0));
    CHECK(munk_profile(2500.0) < munk_profile(2990.0));

    CHECK_THROWS_AS(munk_profile(-1.0), DomainError);
}

TEST_CASE("generator structure and determinism") {
    SsfGrid grid;
    grid.m = 8;
    grid.n = 8;
    grid.i = 40;
    grid.dz_m = 75.0;

    SUBCASE("stripped-down parameters give a depth-only field") {
        GeneratorParams p;
        p.noise_sigma = 0.0;
        p.eddy_amplitude = 0.0;
        p.perturbation_modes = 0;
        const SsfSnapshot s = generate_snapshot(grid, 3, p, 42);
        for (Index z = 0; z < grid.i; ++z) {
            const double ref = s.field.at({0, 0, z});
            CHECK(ref == munk_profile(static_cast<double>(z) * grid.dz_m));
            for (Index y = 0; y < grid.n; ++y) {
                for (Index x = 0; x < grid.m; ++x) {
                    CHECK(s.field.at({x, y, z}) == ref);
                }
            }
        }
    }

    SUBCASE("same seed and day reproduce bit-identical fields") {
        const GeneratorParams p;
        const SsfSnapshot a = generate_snapshot(grid, 7, p, 123);
        const SsfSnapshot b = generate_snapshot(grid, 7, p, 123);
        CHECK(a.field == b.field);
        const SsfSnapshot c = generate_snapshot(grid, 8, p, 123);
        CHECK_FALSE(a.field == c.field);
        const SsfSnapshot d = generate_snapshot(grid, 7, p, 124);
        CHECK_FALSE(a.field == d.field);
    }

    SUBCASE("outputs finite and inside the physical range") {
        const GeneratorParams p;
        for (int day : {1, 15, 200}) {
            const SsfSnapshot s = generate_snapshot(grid, day, p, 5);
            for (double v : s.field.data()) {
                CHECK(std::isfinite(v));
                CHECK(v >= 1400.0);
                CHECK(v <= 1600.0);
            }
        }
    }

    SUBCASE("invalid inputs") {
        const GeneratorParams p;
        CHECK_THROWS_AS(generate_snapshot(grid, 0, p, 1), DomainError);
        SsfGrid bad = grid;
        bad.dz_m = 0.0;
        CHECK_THROWS_AS(generate_snapshot(bad, 1, p, 1), DomainError);
    }
}

TEST_CASE("dataset splits and centering") {
    SsfGrid grid;
    grid.m = 6;
    grid.n = 6;
    grid.i = 30;
    grid.dz_m = 100.0;
    const GeneratorParams p;

    SUBCASE("default split: day 1 trains, the rest test") {
        const SsfDataset ds = build_dataset(grid, 30, p, 9);
        CHECK(ds.snapshots.size() == 30);
        CHECK(ds.train_days == std::vector<int>{1});
        CHECK(ds.test_days.size() == 29);
        CHECK(ds.test_days.front() == 2);
        CHECK(ds.test_days.back() == 30);
        CHECK_THROWS_AS(build_dataset(grid, 1, p, 9), DomainError);
        // Training mean with a single training day is that day's field.
        CHECK(frobenius_norm(ds.perturbation(1)) == 0.0);
    }

    SUBCASE("multiseason blocks: 3 training days and a test week per block") {
        const SsfDataset ds = build_multiseason_dataset(grid, p, 11);
        CHECK(ds.snapshots.size() == 40);
        CHECK(ds.train_days.size() == 12);
        CHECK(ds.test_days.size() == 28);
        for (int day : ds.train_days) {
            CHECK(std::find(ds.test_days.begin(), ds.test_days.end(), day) == ds.test_days.end());
        }
        CHECK(ds.train_days[0] == 1);
        CHECK(ds.train_days[3] == 92);  // next block starts one spacing later

        // De-meaned training stack sums to the zero field.
        DenseTensor sum = DenseTensor::zeros(ds.mean_field.shape());
        for (int day : ds.train_days) {
            const DenseTensor pert = ds.perturbation(day);
            for (size_t k = 0; k < sum.data().size(); ++k) sum.data()[k] += pert.data()[k];
        }
        CHECK(frobenius_norm(sum) <= 1e-9 * frobenius_norm(ds.mean_field) *
                                         static_cast<double>(ds.train_days.size()));
    }
}

TEST_CASE("upper ocean varies more than the deep ocean") {
    const SsfGrid grid;  // default 20 x 20 x 300, dz 10 m
    const GeneratorParams p;
    const int days = 10;

    std::vector<SsfSnapshot> snaps;
    DenseTensor mean = DenseTensor::zeros(Shape({grid.m, grid.n, grid.i}));
    for (int d = 1; d <= days; ++d) {
        snaps.push_back(generate_snapshot(grid, d, p, 21));
        for (size_t k = 0; k < mean.data().size(); ++k) {
            mean.data()[k] += snaps.back().field.data()[k];
        }
    }
    for (double& v : mean.data()) v /= days;

    const Index slice = grid.m * grid.n;
    double var_shallow = 0.0;
    long long n_shallow = 0;
    double var_deep = 0.0;
    long long n_deep = 0;
    for (const auto& s : snaps) {
        for (Index z = 0; z < grid.i; ++z) {
            const double depth = static_cast<double>(z) * grid.dz_m;
            if (depth >= 1000.0 && depth <= 2500.0) continue;
            for (Index k = 0; k < slice; ++k) {
                const Index lin = z * slice + k;
                const double d = s.field[lin] - mean[lin];
                if (depth < 1000.0) {
                    var_shallow += d * d;
                    ++n_shallow;
                } else {
                    var_deep += d * d;
                    ++n_deep;
                }
            }
        }
    }
    CHECK(var_shallow / static_cast<double>(n_shallow) >
          var_deep / static_cast<double>(n_deep));
}

TEST_CASE("de-meaned 30-day stack concentrates energy in few singular values") {
    const SsfGrid grid;  // paper-scale default
    const GeneratorParams p;
    const int days = 30;

    std::vector<DenseTensor> fields;
    DenseTensor mean = DenseTensor::zeros(Shape({grid.m, grid.n, grid.i}));
    for (int d = 1; d <= days; ++d) {
        fields.push_back(generate_snapshot(grid, d, p, 31).field);
        for (size_t k = 0; k < mean.data().size(); ++k) mean.data()[k] += fields.back().data()[k];
    }
    for (double& v : mean.data()) v /= days;

    Eigen::MatrixXd stacked(grid.i, grid.m * grid.n * days);
    for (int d = 0; d < days; ++d) {
        DenseTensor pert = fields[static_cast<size_t>(d)];
        for (size_t k = 0; k < pert.data().size(); ++k) pert.data()[k] -= mean.data()[k];
        stacked.middleCols(static_cast<Index>(d) * grid.m * grid.n, grid.m * grid.n) =
            unfold(pert, 3);
    }
    const auto dec = svd(stacked);
    double total = 0.0;
    double top10 = 0.0;
    for (Index i = 0; i < dec.singular_values.size(); ++i) {
        const double e = dec.singular_values(i) * dec.singular_values(i);
        total += e;
        if (i < 10) top10 += e;
    }
    CHECK(top10 / total > 0.95);
}

TEST_CASE("temporal decorrelation is monotone on average over seeds") {
    // Paper-scale horizontal extent (the eddy track stays inside the domain);
    // the vertical axis is thinned to keep the test fast.
    SsfGrid grid;
    grid.i = 60;
    grid.dz_m = 50.0;
    const GeneratorParams p;
    const int days = 20;
    const int seeds = 32;

    // Fields are de-meaned by the depth-profile average (the same centering
    // the learning pipelines use), so the static horizontal structure stays
    // in the perturbation and the correlation decays rather than swinging
    // through zero.
    std::vector<double> avg_corr(static_cast<size_t>(days), 0.0);
    const Index slice = grid.m * grid.n;
    for (int seed = 1; seed <= seeds; ++seed) {
        std::vector<DenseTensor> fields;
        Eigen::VectorXd profile = Eigen::VectorXd::Zero(grid.i);
        for (int d = 1; d <= days; ++d) {
            fields.push_back(generate_snapshot(grid, d, p, static_cast<std::uint64_t>(seed)).field);
            profile += unfold(fields.back(), 3).rowwise().sum();
        }
        profile /= static_cast<double>(days * slice);
        std::vector<std::vector<double>> perts;
        for (const auto& f : fields) {
            std::vector<double> v(f.data());
            for (Index z = 0; z < grid.i; ++z) {
                for (Index k = 0; k < slice; ++k) {
                    v[static_cast<size_t>(z * slice + k)] -= profile(z);
                }
            }
            perts.push_back(std::move(v));
        }
        for (int d = 0; d < days; ++d) {
            avg_corr[static_cast<size_t>(d)] +=
                pearson_correlation(perts[0], perts[static_cast<size_t>(d)]) / seeds;
        }
    }
    // Seed-averaged correlations, additionally averaged over two-day lag
    // bins to suppress residual sampling noise.
    std::vector<double> binned;
    for (int d = 0; d + 1 < days; d += 2) {
        binned.push_back(0.5 * (avg_corr[static_cast<size_t>(d)] +
                                avg_corr[static_cast<size_t>(d + 1)]));
    }
    for (size_t b = 1; b < binned.size(); ++b) {
        CHECK(binned[b] <= binned[b - 1] + 0.005);
    }
    CHECK(binned.back() < binned.front() - 0.02);
}
