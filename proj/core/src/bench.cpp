// SPDX-License-Identifier: Apache-2.0
#include "ssf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

namespace ssf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_same_shape(const DenseTensor& x, const DenseTensor& x_hat, const char* who) {
    if (x.shape() != x_hat.shape()) {
        throw DomainError(std::string(who) + ": shape mismatch " + x.shape().to_string() + " vs " +
                          x_hat.shape().to_string());
    }
}

double diff_norm(const DenseTensor& x, const DenseTensor& x_hat) {
    double acc = 0.0;
    for (size_t k = 0; k < x.data().size(); ++k) {
        const double d = x.data()[k] - x_hat.data()[k];
        acc += d * d;
    }
    return std::sqrt(acc);
}

Eigen::VectorXd profile_mean(const std::vector<const DenseTensor*>& fields) {
    const Index i_dim = fields.front()->shape().dim(3);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(i_dim);
    long long cols = 0;
    for (const DenseTensor* f : fields) {
        const Eigen::MatrixXd u = unfold(*f, 3);
        mean += u.rowwise().sum();
        cols += u.cols();
    }
    return mean / static_cast<double>(cols);
}

DenseTensor broadcast_profile(const Eigen::VectorXd& profile, const Shape& shape) {
    DenseTensor out{shape};
    const Index slice = shape.dim(1) * shape.dim(2);
    double* dst = out.data().data();
    for (Index iz = 0; iz < shape.dim(3); ++iz) {
        const double v = profile(iz);
        for (Index k = 0; k < slice; ++k) *dst++ = v;
    }
    return out;
}

DenseTensor subtract(const DenseTensor& a, const DenseTensor& b) {
    DenseTensor out = a;
    for (size_t k = 0; k < out.data().size(); ++k) out.data()[k] -= b.data()[k];
    return out;
}

DenseTensor add(const DenseTensor& a, const DenseTensor& b) {
    DenseTensor out = a;
    for (size_t k = 0; k < out.data().size(); ++k) out.data()[k] += b.data()[k];
    return out;
}

std::vector<const DenseTensor*> training_fields(const SsfDataset& ds) {
    std::vector<const DenseTensor*> out;
    for (int day : ds.train_days) {
        out.push_back(&ds.by_day(day).field);
    }
    return out;
}

Eigen::MatrixXd concat_unfold3(const std::vector<const DenseTensor*>& fields) {
    const Index i_dim = fields.front()->shape().dim(3);
    Index cols = 0;
    for (const DenseTensor* f : fields) cols += f->size() / i_dim;
    Eigen::MatrixXd out(i_dim, cols);
    Index at = 0;
    for (const DenseTensor* f : fields) {
        const Eigen::MatrixXd u = unfold(*f, 3);
        out.middleCols(at, u.cols()) = u;
        at += u.cols();
    }
    return out;
}

double default_period_x(const SsfGrid& grid, const FourierEofSpec& s) {
    return s.lx ? *s.lx : static_cast<double>(grid.m);
}

double default_period_y(const SsfGrid& grid, const FourierEofSpec& s) {
    return s.ly ? *s.ly : static_cast<double>(grid.n);
}

}  // namespace

double rmse_eq27(const DenseTensor& x, const DenseTensor& x_hat) {
    check_same_shape(x, x_hat, "rmse_eq27");
    if (x.order() != 3) {
        throw DomainError("rmse_eq27: expected 3-way tensors");
    }
    return diff_norm(x, x_hat) / static_cast<double>(x.shape().dim(3));
}

double rmse_normalized(const DenseTensor& x, const DenseTensor& x_hat) {
    check_same_shape(x, x_hat, "rmse_normalized");
    return diff_norm(x, x_hat) / std::sqrt(static_cast<double>(x.size()));
}

long long coefficient_count(const MethodSpec& method, const SsfGrid& grid) {
    struct Visitor {
        const SsfGrid& grid;
        long long operator()(const HooiSpec& s) const {
            return static_cast<long long>(s.l1) * s.l2 * s.l3;
        }
        long long operator()(const EofSpec& s) const {
            return static_cast<long long>(s.k) * grid.m * grid.n;
        }
        long long operator()(const KsvdSpec& s) const {
            return static_cast<long long>(s.t) * grid.m * grid.n;
        }
        long long operator()(const FourierEofSpec& s) const {
            return static_cast<long long>(s.nf1) * s.nf2 * s.kf;
        }
    };
    return std::visit(Visitor{grid}, method.spec);
}

AnyBasis train_method(const MethodSpec& method, const SsfDataset& dataset,
                      const TrainOptions& opts) {
    const auto fields = training_fields(dataset);
    if (fields.empty()) {
        throw DomainError("train_method: dataset has no training days");
    }
    const Shape& shape = fields.front()->shape();
    const SsfGrid& grid = dataset.snapshots.front().grid;

    if (const auto* h = std::get_if<HooiSpec>(&method.spec)) {
        const Eigen::VectorXd mean = profile_mean(fields);
        const DenseTensor mean_field = broadcast_profile(mean, shape);
        const MultilinearRank rank{h->l1, h->l2, h->l3};
        HooiOptions hopts{opts.hooi_tol, opts.hooi_max_iter, opts.strict_paper};
        TuckerBasis basis;
        if (fields.size() == 1) {
            basis = hooi(subtract(*fields.front(), mean_field), rank, hopts).basis;
        } else {
            std::vector<DenseTensor> centered;
            centered.reserve(fields.size());
            for (const DenseTensor* f : fields) centered.push_back(subtract(*f, mean_field));
            basis = mhooi(centered, rank, hopts).basis;
        }
        basis.mean_field = mean_field;
        return basis;
    }
    if (const auto* e = std::get_if<EofSpec>(&method.spec)) {
        auto demeaned = demean_matrix(concat_unfold3(fields));
        EofBasis basis = learn_eof(demeaned.centered, e->k);
        basis.mean = std::move(demeaned.mean);
        return basis;
    }
    if (const auto* k = std::get_if<KsvdSpec>(&method.spec)) {
        auto demeaned = demean_matrix(concat_unfold3(fields));
        KsvdOptions kopts;
        kopts.max_iter = k->max_iter;
        auto [dict, code] = ksvd_learn(demeaned.centered, k->z, k->t, kopts, opts.seed);
        return KsvdBasis{std::move(dict), std::move(demeaned.mean)};
    }
    const auto& f = std::get<FourierEofSpec>(method.spec);
    auto demeaned = demean_matrix(concat_unfold3(fields));
    FourierEofBasis basis;
    basis.lx = default_period_x(grid, f);
    basis.ly = default_period_y(grid, f);
    basis.f1 = build_fourier_matrix(shape.dim(1), f.nf1, basis.lx);
    basis.f2 = build_fourier_matrix(shape.dim(2), f.nf2, basis.ly);
    basis.eof = learn_eof(demeaned.centered, f.kf).factors;
    basis.mean_field = broadcast_profile(demeaned.mean, shape);
    return basis;
}

Coefficients encode_with(const AnyBasis& basis, const DenseTensor& field) {
    Coefficients out;
    out.field_shape = field.shape();
    if (const auto* b = std::get_if<EofBasis>(&basis)) {
        Eigen::MatrixXd x = unfold(field, 3);
        x.colwise() -= b->mean;
        out.value = eof_encode(x, *b);
    } else if (const auto* b2 = std::get_if<FourierEofBasis>(&basis)) {
        out.value = fourier_eof_encode(subtract(field, b2->mean_field), *b2);
    } else if (const auto* b3 = std::get_if<KsvdBasis>(&basis)) {
        Eigen::MatrixXd x = unfold(field, 3);
        x.colwise() -= b3->mean;
        out.value = ksvd_encode(x, b3->dictionary);
    } else {
        const auto& b4 = std::get<TuckerBasis>(basis);
        out.value = tucker_encode(subtract(field, b4.mean_field), b4);
    }
    return out;
}

DenseTensor decode_with(const AnyBasis& basis, const Coefficients& coeffs) {
    if (const auto* b = std::get_if<EofBasis>(&basis)) {
        Eigen::MatrixXd x = eof_decode(std::get<Eigen::MatrixXd>(coeffs.value), *b);
        x.colwise() += b->mean;
        return fold(x, 3, coeffs.field_shape);
    }
    if (const auto* b2 = std::get_if<FourierEofBasis>(&basis)) {
        auto decoded = fourier_eof_decode(std::get<Eigen::MatrixXcd>(coeffs.value), *b2);
        return add(decoded.field, b2->mean_field);
    }
    if (const auto* b3 = std::get_if<KsvdBasis>(&basis)) {
        Eigen::MatrixXd x = ksvd_decode(std::get<SparseCode>(coeffs.value), b3->dictionary);
        x.colwise() += b3->mean;
        return fold(x, 3, coeffs.field_shape);
    }
    const auto& b4 = std::get<TuckerBasis>(basis);
    DenseTensor field = tucker_decode(std::get<DenseTensor>(coeffs.value), b4);
    return add(field, b4.mean_field);
}

std::string ExperimentReport::csv_header() {
    return "method,day,split,rmse_eq27,rmse_normalized,coeff_count,train_s,encode_s,decode_s,seed";
}

std::string ExperimentReport::to_csv() const {
    std::ostringstream os;
    os << csv_header() << "\n";
    char buf[64];
    const auto fmt = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (const auto& r : rows) {
        os << r.method << "," << r.day << "," << r.split << "," << fmt(r.rmse_eq27) << ","
           << fmt(r.rmse_normalized) << "," << r.coeff_count << "," << fmt(r.train_s) << ","
           << fmt(r.encode_s) << "," << fmt(r.decode_s) << "," << r.seed << "\n";
    }
    return os.str();
}

SsfDataset build_config_dataset(const ExperimentConfig& config) {
    SsfDataset ds;
    ds.snapshots.reserve(static_cast<size_t>(config.days));
    for (int d = 1; d <= config.days; ++d) {
        ds.snapshots.push_back(generate_snapshot(config.grid, d, config.generator, config.seed));
    }
    ds.train_days = config.train_days;
    if (!config.test_days.empty()) {
        ds.test_days = config.test_days;
    } else {
        for (int d = 1; d <= config.days; ++d) {
            if (std::find(ds.train_days.begin(), ds.train_days.end(), d) == ds.train_days.end()) {
                ds.test_days.push_back(d);
            }
        }
    }
    DenseTensor mean = DenseTensor::zeros(ds.snapshots.front().field.shape());
    for (int day : ds.train_days) {
        const DenseTensor& f = ds.by_day(day).field;
        for (size_t k = 0; k < mean.data().size(); ++k) mean.data()[k] += f.data()[k];
    }
    for (double& v : mean.data()) v /= static_cast<double>(ds.train_days.size());
    ds.mean_field = std::move(mean);
    return ds;
}

namespace {

// Shared by compare and sweep: train one method, reconstruct the requested
// days, return per-day rows (timing columns zero).
std::vector<ReportRow> evaluate_method(const MethodSpec& method, const std::string& label,
                                       const SsfDataset& ds, const ExperimentConfig& config,
                                       long long budget) {
    std::vector<ReportRow> rows;
    const TrainOptions opts{config.hooi_tol, config.hooi_max_iter, config.strict_paper,
                            config.seed};
    std::vector<std::pair<int, std::string>> days;
    for (int d : ds.train_days) days.emplace_back(d, "train");
    for (int d : ds.test_days) days.emplace_back(d, "test");
    std::sort(days.begin(), days.end());

    try {
        const AnyBasis basis = train_method(method, ds, opts);
        for (const auto& [day, split] : days) {
            const DenseTensor& field = ds.by_day(day).field;
            const Coefficients coeffs = encode_with(basis, field);
            const DenseTensor rec = decode_with(basis, coeffs);
            ReportRow row;
            row.method = label;
            row.day = day;
            row.split = split;
            row.rmse_eq27 = rmse_eq27(field, rec);
            row.rmse_normalized = rmse_normalized(field, rec);
            row.coeff_count = budget;
            row.seed = config.seed;
            rows.push_back(std::move(row));
        }
    } catch (const Error& e) {
        std::cerr << "method " << label << " failed: " << e.what() << "\n";
        for (const auto& [day, split] : days) {
            ReportRow row;
            row.method = label;
            row.day = day;
            row.split = split;
            row.coeff_count = budget;
            row.seed = config.seed;
            row.failed = true;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace

ExperimentReport run_compare(const ExperimentConfig& config) {
    const SsfDataset ds = build_config_dataset(config);
    ExperimentReport report;
    for (const MethodSpec& method : config.methods) {
        auto rows = evaluate_method(method, method.label(), ds, config,
                                    coefficient_count(method, config.grid));
        report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    }
    return report;
}

std::string SweepOutcome::summary_csv() const {
    std::ostringstream os;
    os << "family,target_rmse_normalized,min_budget\n";
    char buf[64];
    for (const auto& c : curves) {
        std::snprintf(buf, sizeof(buf), "%.17g", target_rmse_normalized);
        os << c.family << "," << buf << ",";
        if (std::isinf(c.min_budget)) {
            os << "inf";
        } else {
            os << static_cast<long long>(c.min_budget);
        }
        os << "\n";
    }
    return os.str();
}

SweepOutcome run_budget_sweep(const ExperimentConfig& config) {
    const SsfDataset ds = build_config_dataset(config);
    SweepOutcome out;
    out.target_rmse_normalized = config.sweep.target_rmse_normalized;

    const auto run_variant = [&](const MethodSpec& spec, SweepCurve& curve) {
        const long long budget = coefficient_count(spec, config.grid);
        auto rows = evaluate_method(spec, spec.label(), ds, config, budget);
        double total = 0.0;
        long long count = 0;
        for (const auto& r : rows) {
            if (r.split == "test" && !r.failed) {
                total += r.rmse_normalized;
                ++count;
            }
        }
        out.report.rows.insert(out.report.rows.end(), rows.begin(), rows.end());
        if (count > 0) {
            const double mean = total / static_cast<double>(count);
            curve.points.emplace_back(budget, mean);
            if (mean <= config.sweep.target_rmse_normalized) {
                curve.min_budget = std::min(curve.min_budget, static_cast<double>(budget));
            }
        }
    };

    SweepCurve hooi_curve{"hooi", {}, std::numeric_limits<double>::infinity()};
    for (const auto& r : config.sweep.hooi_ranks) {
        run_variant(MethodSpec{HooiSpec{r[0], r[1], r[2]}}, hooi_curve);
    }
    out.curves.push_back(std::move(hooi_curve));

    SweepCurve eof_curve{"eof", {}, std::numeric_limits<double>::infinity()};
    for (Index k : config.sweep.eof_ks) {
        run_variant(MethodSpec{EofSpec{k}}, eof_curve);
    }
    out.curves.push_back(std::move(eof_curve));

    SweepCurve ksvd_curve{"ksvd", {}, std::numeric_limits<double>::infinity()};
    for (int t : config.sweep.ksvd_ts) {
        run_variant(MethodSpec{KsvdSpec{config.sweep.ksvd_z, t, config.sweep.ksvd_max_iter}},
                    ksvd_curve);
    }
    out.curves.push_back(std::move(ksvd_curve));

    SweepCurve fourier_curve{"fourier_eof", {}, std::numeric_limits<double>::infinity()};
    for (const auto& r : config.sweep.fourier_sizes) {
        run_variant(MethodSpec{FourierEofSpec{r[0], r[1], r[2], std::nullopt, std::nullopt}},
                    fourier_curve);
    }
    out.curves.push_back(std::move(fourier_curve));

    return out;
}

ExperimentReport run_multiseason(const ExperimentConfig& config) {
    const MultiseasonSpec& ms = config.multiseason;
    const SsfDataset ds = build_multiseason_dataset(ms.grid, config.generator, config.seed,
                                                    ms.blocks, ms.spacing_days, ms.train_per_block,
                                                    ms.test_per_block);
    const MethodSpec joint{HooiSpec{ms.rank[0], ms.rank[1], ms.rank[2]}};
    ExperimentReport report;

    // Shared factors from all blocks' training days.
    {
        ExperimentConfig sub = config;
        sub.grid = ms.grid;
        auto rows = evaluate_method(joint, "m" + joint.label(), ds, sub,
                                    coefficient_count(joint, ms.grid));
        report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    }

    // Single-block factors from each block's first training day, evaluated
    // everywhere.
    for (int b = 0; b < ms.blocks; ++b) {
        const int train_day = 1 + b * ms.spacing_days;
        SsfDataset single = ds;
        single.train_days = {train_day};
        single.test_days.clear();
        for (const auto& s : ds.snapshots) {
            if (s.day != train_day) single.test_days.push_back(s.day);
        }
        single.mean_field = single.by_day(train_day).field;
        ExperimentConfig sub = config;
        sub.grid = ms.grid;
        auto rows = evaluate_method(joint, joint.label() + "@block" + std::to_string(b), single,
                                    sub, coefficient_count(joint, ms.grid));
        report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    }
    return report;
}

TimingOutcome run_timing(const ExperimentConfig& config) {
    const SsfDataset ds = build_config_dataset(config);
    if (ds.test_days.empty()) {
        throw DomainError("run_timing: need at least one test day");
    }
    const int probe_day = ds.test_days.front();
    const DenseTensor& probe = ds.by_day(probe_day).field;
    const int repeats = std::max(2, config.timing_repeats);
    const TrainOptions opts{config.hooi_tol, config.hooi_max_iter, config.strict_paper,
                            config.seed};

    TimingOutcome out;
    for (const MethodSpec& method : config.methods) {
        MethodTiming timing;
        timing.method = method.label();

        AnyBasis basis = train_method(method, ds, opts);  // warmup, excluded
        for (int rep = 0; rep < repeats; ++rep) {
            const auto t0 = Clock::now();
            basis = train_method(method, ds, opts);
            timing.train_reps.push_back(seconds_since(t0));
        }

        Coefficients coeffs = encode_with(basis, probe);  // warmup
        for (int rep = 0; rep < repeats; ++rep) {
            const auto t0 = Clock::now();
            coeffs = encode_with(basis, probe);
            timing.encode_reps.push_back(seconds_since(t0));
        }

        DenseTensor rec = decode_with(basis, coeffs);  // warmup
        for (int rep = 0; rep < repeats; ++rep) {
            const auto t0 = Clock::now();
            rec = decode_with(basis, coeffs);
            timing.decode_reps.push_back(seconds_since(t0));
        }

        const auto median = [](std::vector<double> v) {
            std::sort(v.begin(), v.end());
            const size_t n = v.size();
            return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
        };

        ReportRow row;
        row.method = timing.method;
        row.day = probe_day;
        row.split = "timing";
        row.rmse_eq27 = rmse_eq27(probe, rec);
        row.rmse_normalized = rmse_normalized(probe, rec);
        row.coeff_count = coefficient_count(method, config.grid);
        row.train_s = median(timing.train_reps);
        row.encode_s = median(timing.encode_reps);
        row.decode_s = median(timing.decode_reps);
        row.seed = config.seed;
        out.report.rows.push_back(std::move(row));
        out.details.push_back(std::move(timing));
    }
    return out;
}

}  // namespace ssf
