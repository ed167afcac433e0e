// SPDX-License-Identifier: Apache-2.0
//
// ssfbench: benchmark driver for reduced-order sound-speed-field bases.
//
// Subcommands: gen, train, encode, decode, compare, sweep, multiseason,
// timing, verify. Exit codes: 0 success, 2 configuration/input error,
// 3 numeric failure, 4 verification-gate failure.
#include "ssf/bench.hpp"
#include "ssf/io.hpp"
#include "ssf/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

namespace fs = std::filesystem;
using namespace ssf;

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    bool strict_paper = false;
};

ExperimentConfig load_config(const CommonArgs& args) {
    ExperimentConfig cfg =
        args.config_path.empty() ? parse_config("{}") : read_config(args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (args.strict_paper) cfg.strict_paper = true;
    return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
    if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os << text;
}

void write_report(const ExperimentConfig& cfg, const ExperimentReport& report,
                  const std::string& name) {
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    write_text(dir / (name + ".csv"), report.to_csv());

    nlohmann::json sidecar;
    sidecar["config_hash"] = config_hash(cfg);
    sidecar["seed"] = cfg.seed;
    sidecar["config"] = nlohmann::json::parse(config_to_json(cfg));
    write_text(dir / (name + ".json"), sidecar.dump(2) + "\n");
    std::cout << "wrote " << (dir / (name + ".csv")).string() << "\n";
}

DenseTensor random_tensor(SplitMix64& rng, const Shape& shape) {
    DenseTensor t{shape};
    for (double& v : t.data()) v = rng.normal();
    return t;
}

int cmd_gen(const CommonArgs& args) {
    const ExperimentConfig cfg = load_config(args);
    const SsfDataset ds = build_config_dataset(cfg);
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    nlohmann::json manifest;
    manifest["config_hash"] = config_hash(cfg);
    manifest["seed"] = cfg.seed;
    manifest["train_days"] = ds.train_days;
    manifest["test_days"] = ds.test_days;
    manifest["files"] = nlohmann::json::array();
    for (const auto& snap : ds.snapshots) {
        char name[32];
        std::snprintf(name, sizeof(name), "day_%03d.dt01", snap.day);
        write_tensor(dir / name, snap.field);
        manifest["files"].push_back(name);
    }
    write_tensor(dir / "mean_field.dt01", ds.mean_field);
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << ds.snapshots.size() << " snapshots to " << dir.string() << "\n";
    return 0;
}

int cmd_train(const CommonArgs& args, const std::string& method_name,
              const std::string& basis_path) {
    const ExperimentConfig cfg = load_config(args);
    const MethodSpec* chosen = nullptr;
    for (const auto& m : cfg.methods) {
        if (m.name() == method_name) {
            chosen = &m;
            break;
        }
    }
    if (!chosen) {
        throw ConfigError("methods", "no method named '" + method_name + "' in the config");
    }
    const SsfDataset ds = build_config_dataset(cfg);
    const TrainOptions opts{cfg.hooi_tol, cfg.hooi_max_iter, cfg.strict_paper, cfg.seed};
    const AnyBasis basis = train_method(*chosen, ds, opts);
    write_basis(basis_path, basis);
    std::cout << "trained " << chosen->label() << ", wrote " << basis_path << "\n";
    return 0;
}

// Coefficients travel as DT01 tensors: an order-3 core for the tensor basis,
// an order-2 matrix for the orthonormal basis, a dense order-2 matrix for
// the dictionary code, and a 2 x KF x (NF1*NF2) stack of real and imaginary
// planes for the separable complex basis.
DenseTensor coefficients_to_tensor(const AnyBasis& basis, const Coefficients& coeffs) {
    if (std::holds_alternative<TuckerBasis>(basis)) {
        return std::get<DenseTensor>(coeffs.value);
    }
    if (std::holds_alternative<EofBasis>(basis)) {
        const auto& w = std::get<Eigen::MatrixXd>(coeffs.value);
        std::vector<double> data(w.data(), w.data() + w.size());
        return DenseTensor(Shape({w.rows(), w.cols()}), std::move(data));
    }
    if (std::holds_alternative<KsvdBasis>(basis)) {
        const Eigen::MatrixXd dense = std::get<SparseCode>(coeffs.value).to_dense();
        std::vector<double> data(dense.data(), dense.data() + dense.size());
        return DenseTensor(Shape({dense.rows(), dense.cols()}), std::move(data));
    }
    const auto& w = std::get<Eigen::MatrixXcd>(coeffs.value);
    DenseTensor out{Shape({2, w.rows(), w.cols()})};
    for (Index c = 0; c < w.cols(); ++c) {
        for (Index r = 0; r < w.rows(); ++r) {
            out.at({0, r, c}) = w(r, c).real();
            out.at({1, r, c}) = w(r, c).imag();
        }
    }
    return out;
}

Coefficients tensor_to_coefficients(const AnyBasis& basis, const DenseTensor& t,
                                    const Shape& field_shape) {
    Coefficients out;
    out.field_shape = field_shape;
    if (std::holds_alternative<TuckerBasis>(basis)) {
        out.value = t;
        return out;
    }
    if (std::holds_alternative<EofBasis>(basis)) {
        if (t.order() != 2) throw DomainError("decode: expected an order-2 coefficient matrix");
        out.value = Eigen::MatrixXd(
            Eigen::Map<const Eigen::MatrixXd>(t.data().data(), t.shape().dim(1), t.shape().dim(2)));
        return out;
    }
    if (std::holds_alternative<KsvdBasis>(basis)) {
        if (t.order() != 2) throw DomainError("decode: expected an order-2 coefficient matrix");
        SparseCode code;
        code.rows = t.shape().dim(1);
        code.columns.resize(static_cast<size_t>(t.shape().dim(2)));
        for (Index j = 0; j < t.shape().dim(2); ++j) {
            for (Index r = 0; r < code.rows; ++r) {
                const double v = t.at({r, j});
                if (v != 0.0) code.columns[static_cast<size_t>(j)].emplace_back(r, v);
            }
        }
        out.value = std::move(code);
        return out;
    }
    if (t.order() != 3 || t.shape().dim(1) != 2) {
        throw DomainError("decode: expected a 2 x KF x NF coefficient stack");
    }
    Eigen::MatrixXcd w(t.shape().dim(2), t.shape().dim(3));
    for (Index c = 0; c < w.cols(); ++c) {
        for (Index r = 0; r < w.rows(); ++r) {
            w(r, c) = std::complex<double>(t.at({0, r, c}), t.at({1, r, c}));
        }
    }
    out.value = std::move(w);
    return out;
}

int cmd_encode(const std::string& basis_path, const std::string& input_path,
               const std::string& out_path) {
    const AnyBasis basis = read_basis(basis_path);
    const DenseTensor field = read_tensor(fs::path(input_path));
    const Coefficients coeffs = encode_with(basis, field);
    write_tensor(fs::path(out_path), coefficients_to_tensor(basis, coeffs));
    std::cout << "encoded " << input_path << " -> " << out_path << "\n";
    return 0;
}

int cmd_decode(const std::string& basis_path, const std::string& input_path,
               const std::string& out_path, const std::vector<Index>& shape_arg) {
    const AnyBasis basis = read_basis(basis_path);
    const DenseTensor coeff_tensor = read_tensor(fs::path(input_path));
    Shape field_shape{std::vector<Index>{1}};
    if (!shape_arg.empty()) {
        field_shape = Shape(shape_arg);
    } else if (const auto* tucker = std::get_if<TuckerBasis>(&basis)) {
        field_shape = tucker->mean_field.shape();
    } else if (const auto* fourier = std::get_if<FourierEofBasis>(&basis)) {
        field_shape = fourier->mean_field.shape();
    } else {
        throw ConfigError("--shape", "this basis does not carry the field shape; pass --shape");
    }
    const Coefficients coeffs = tensor_to_coefficients(basis, coeff_tensor, field_shape);
    write_tensor(fs::path(out_path), decode_with(basis, coeffs));
    std::cout << "decoded " << input_path << " -> " << out_path << "\n";
    return 0;
}

int cmd_verify(const CommonArgs& args) {
    const ExperimentConfig cfg = load_config(args);
    SplitMix64 rng(cfg.seed + 977);
    bool ok = true;
    const auto gate = [&](const char* name, bool pass, double value) {
        std::cout << (pass ? "PASS" : "FAIL") << "  " << name << " (" << value << ")\n";
        ok = ok && pass;
    };

    // Identity-factor equivalence of the constrained vertical basis.
    double worst1 = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const DenseTensor x = random_tensor(rng, Shape({5, 6, 7}));
        for (Index k = 1; k <= 3; ++k) {
            worst1 = std::max(worst1, verify_prop1(x, k).projector_distance);
        }
    }
    gate("identity-factor vertical basis equivalence", worst1 <= 1e-8, worst1);

    // Fourier-factor equivalence with unitary-scaled factors, plus the
    // optimality margin of the constrained solution for rectangular factors.
    double worst2 = 0.0;
    double worst_margin = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const DenseTensor x = random_tensor(rng, Shape({4, 4, 6}));
        for (Index kf = 1; kf <= 3; ++kf) {
            worst2 = std::max(worst2, verify_prop2(x, 4, 4, kf, 4.0, 4.0).projector_distance);
        }
        const auto general = verify_prop2(x, 2, 2, 2, 4.0, 4.0);
        worst_margin = std::max(worst_margin,
                                general.constrained_objective - general.classical_objective);
    }
    gate("fourier-factor vertical basis equivalence (unitary)", worst2 <= 1e-8, worst2);
    gate("fourier-factor constrained objective is optimal", worst_margin <= 1e-9, worst_margin);

    // Core invariants: exact unfolding round trips and the projection
    // energy identity.
    bool round_trip = true;
    double pythagoras = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const DenseTensor x = random_tensor(rng, Shape({4, 5, 6}));
        for (Index p = 1; p <= 3; ++p) {
            round_trip = round_trip && (fold(unfold(x, p), p, x.shape()) == x);
        }
        const HooiResult r = hooi(x, {2, 2, 2});
        const double x2 = std::pow(frobenius_norm(x), 2);
        const double s2 = std::pow(frobenius_norm(r.core), 2);
        const DenseTensor rec = tucker_decode(r.core, r.basis);
        double r2 = 0.0;
        for (Index e = 0; e < x.size(); ++e) r2 += (x[e] - rec[e]) * (x[e] - rec[e]);
        pythagoras = std::max(pythagoras, std::abs(r2 - (x2 - s2)) / x2);
    }
    gate("unfolding round trips are exact", round_trip, 0.0);
    gate("projection energy identity", pythagoras <= 1e-8, pythagoras);

    return ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reduced-order basis benchmark for 3-D sound-speed fields"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    CommonArgs common;
    app.add_option("--config", common.config_path, "JSON experiment configuration");
    app.add_option("--seed", common.seed, "Override the config seed");
    app.add_option("--out", common.out_dir, "Override the output directory");
    app.add_flag("--strict-paper", common.strict_paper,
                 "Use the stale-factor variant of the mode-3 update");

    auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset as DT01 files");

    std::string method_name;
    std::string basis_path = "basis.bs01";
    auto* train = app.add_subcommand("train", "Train one method and write its basis");
    train->add_option("--method", method_name, "Method name (hooi, eof, ksvd, fourier_eof)")
        ->required();
    train->add_option("--basis", basis_path, "Output basis file");

    std::string input_path, output_path;
    std::vector<Index> shape_arg;
    auto* encode = app.add_subcommand("encode", "Encode a DT01 tensor with a basis file");
    encode->add_option("--basis", basis_path, "Basis file")->required();
    encode->add_option("--input", input_path, "Input DT01 tensor")->required();
    encode->add_option("--output", output_path, "Output DT01 coefficients")->required();

    auto* decode = app.add_subcommand("decode", "Decode DT01 coefficients with a basis file");
    decode->add_option("--basis", basis_path, "Basis file")->required();
    decode->add_option("--input", input_path, "Input DT01 coefficients")->required();
    decode->add_option("--output", output_path, "Output DT01 tensor")->required();
    decode->add_option("--shape", shape_arg, "Field shape (m n i) when the basis lacks it");

    auto* compare = app.add_subcommand("compare", "Equal-budget comparison over all methods");
    auto* sweep = app.add_subcommand("sweep", "Budget sweep with minimal-budget search");
    auto* multiseason = app.add_subcommand("multiseason", "Joint vs single-block factor study");
    auto* timing = app.add_subcommand("timing", "Wall-clock timing per phase per method");
    auto* verify = app.add_subcommand("verify", "Equivalence checks and invariant gates");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(common);
        if (train->parsed()) return cmd_train(common, method_name, basis_path);
        if (encode->parsed()) return cmd_encode(basis_path, input_path, output_path);
        if (decode->parsed()) return cmd_decode(basis_path, input_path, output_path, shape_arg);
        if (compare->parsed()) {
            const ExperimentConfig cfg = load_config(common);
            write_report(cfg, run_compare(cfg), "compare");
            return 0;
        }
        if (sweep->parsed()) {
            const ExperimentConfig cfg = load_config(common);
            const SweepOutcome out = run_budget_sweep(cfg);
            write_report(cfg, out.report, "sweep");
            write_text(std::filesystem::path(cfg.out_dir) / "sweep_summary.csv",
                       out.summary_csv());
            return 0;
        }
        if (multiseason->parsed()) {
            const ExperimentConfig cfg = load_config(common);
            write_report(cfg, run_multiseason(cfg), "multiseason");
            return 0;
        }
        if (timing->parsed()) {
            const ExperimentConfig cfg = load_config(common);
            write_report(cfg, run_timing(cfg).report, "timing");
            return 0;
        }
        if (verify->parsed()) return cmd_verify(common);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
