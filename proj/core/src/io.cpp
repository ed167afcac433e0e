// SPDX-License-Identifier: Apache-2.0
#include "ssf/io.hpp"

#include <json.hpp>

#include <bit>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ssf {

namespace {

using nlohmann::json;

constexpr char kTensorMagic[4] = {'D', 'T', '0', '1'};
constexpr char kBasisMagic[4] = {'B', 'S', '0', '1'};
constexpr Index kMaxOrder = 32;

void put_bytes(std::ostream& os, const void* p, size_t n) {
    os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!os) {
        throw Error("io: write failed");
    }
}

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    put_bytes(os, b, 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    put_bytes(os, b, 8);
}

void put_f64(std::ostream& os, double v) { put_u64(os, std::bit_cast<std::uint64_t>(v)); }

bool get_bytes(std::istream& is, void* p, size_t n) {
    is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    return static_cast<size_t>(is.gcount()) == n;
}

std::uint32_t get_u32(std::istream& is, const char* what) {
    unsigned char b[4];
    if (!get_bytes(is, b, 4)) {
        throw ParseError(ParseError::Kind::Truncated, std::string("truncated ") + what);
    }
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& is, const char* what) {
    unsigned char b[8];
    if (!get_bytes(is, b, 8)) {
        throw ParseError(ParseError::Kind::Truncated, std::string("truncated ") + what);
    }
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& is, const char* what) {
    return std::bit_cast<double>(get_u64(is, what));
}

void expect_magic(std::istream& is, const char (&magic)[4], const char* name) {
    char b[4] = {};
    is.read(b, 4);
    if (is.gcount() != 4 || std::memcmp(b, magic, 4) != 0) {
        throw ParseError(ParseError::Kind::BadMagic, std::string("bad magic, expected ") + name);
    }
}

DenseTensor matrix_to_tensor(const Eigen::MatrixXd& m) {
    std::vector<double> data(m.data(), m.data() + m.size());
    return DenseTensor(Shape({m.rows(), m.cols()}), std::move(data));
}

Eigen::MatrixXd tensor_to_matrix(const DenseTensor& t, const char* what) {
    if (t.order() != 2) {
        throw ParseError(ParseError::Kind::BadValue,
                         std::string(what) + ": expected an order-2 block");
    }
    return Eigen::Map<const Eigen::MatrixXd>(t.data().data(), t.shape().dim(1), t.shape().dim(2));
}

Eigen::VectorXd tensor_to_vector(const DenseTensor& t, const char* what) {
    if (t.order() != 1) {
        throw ParseError(ParseError::Kind::BadValue,
                         std::string(what) + ": expected an order-1 block");
    }
    return Eigen::Map<const Eigen::VectorXd>(t.data().data(), t.shape().dim(1));
}

DenseTensor vector_to_tensor(const Eigen::VectorXd& v) {
    return DenseTensor(Shape({static_cast<Index>(v.size())}),
                       std::vector<double>(v.data(), v.data() + v.size()));
}

void write_matrix_planes(std::ostream& os, const Eigen::MatrixXcd& m) {
    write_tensor(os, matrix_to_tensor(m.real()));
    write_tensor(os, matrix_to_tensor(m.imag()));
}

Eigen::MatrixXcd read_matrix_planes(std::istream& is, const char* what) {
    const Eigen::MatrixXd re = tensor_to_matrix(read_tensor(is), what);
    const Eigen::MatrixXd im = tensor_to_matrix(read_tensor(is), what);
    if (re.rows() != im.rows() || re.cols() != im.cols()) {
        throw ParseError(ParseError::Kind::BadValue,
                         std::string(what) + ": real/imaginary plane shape mismatch");
    }
    Eigen::MatrixXcd out(re.rows(), re.cols());
    out.real() = re;
    out.imag() = im;
    return out;
}

}  // namespace

void write_tensor(std::ostream& os, const DenseTensor& t) {
    put_bytes(os, kTensorMagic, 4);
    put_u32(os, static_cast<std::uint32_t>(t.order()));
    for (Index d : t.shape().dims()) {
        put_u64(os, static_cast<std::uint64_t>(d));
    }
    for (double v : t.data()) {
        put_f64(os, v);
    }
}

void write_tensor(const std::filesystem::path& path, const DenseTensor& t) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw Error("write_tensor: cannot open " + path.string());
    }
    write_tensor(os, t);
}

DenseTensor read_tensor(std::istream& is) {
    expect_magic(is, kTensorMagic, "DT01");
    const std::uint32_t order = get_u32(is, "tensor header");
    if (order < 1 || order > kMaxOrder) {
        throw ParseError(ParseError::Kind::BadValue,
                         "tensor order " + std::to_string(order) + " out of range");
    }
    std::vector<Index> dims(order);
    Index count = 1;
    for (auto& d : dims) {
        const std::uint64_t raw = get_u64(is, "tensor dims");
        if (raw < 1 || raw > static_cast<std::uint64_t>(std::numeric_limits<Index>::max())) {
            throw ParseError(ParseError::Kind::BadValue, "tensor dimension out of range");
        }
        d = static_cast<Index>(raw);
        if (__builtin_mul_overflow(count, d, &count)) {
            throw ParseError(ParseError::Kind::BadValue, "tensor element count overflows");
        }
    }
    std::vector<double> data(static_cast<size_t>(count));
    for (Index i = 0; i < count; ++i) {
        unsigned char b[8];
        if (!get_bytes(is, b, 8)) {
            throw ParseError(ParseError::Kind::PayloadMismatch,
                             "payload length mismatch: declared " + std::to_string(count) +
                                 " values, found " + std::to_string(i));
        }
        std::uint64_t v = 0;
        for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
        data[static_cast<size_t>(i)] = std::bit_cast<double>(v);
    }
    return DenseTensor(Shape(dims), std::move(data));
}

DenseTensor read_tensor(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw Error("read_tensor: cannot open " + path.string());
    }
    DenseTensor t = read_tensor(is);
    if (is.peek() != std::char_traits<char>::eof()) {
        throw ParseError(ParseError::Kind::PayloadMismatch,
                         path.string() + ": payload length mismatch (trailing bytes)");
    }
    return t;
}

std::string basis_kind_name(const AnyBasis& b) {
    struct Visitor {
        std::string operator()(const EofBasis&) const { return "eof"; }
        std::string operator()(const FourierEofBasis&) const { return "fourier_eof"; }
        std::string operator()(const KsvdBasis&) const { return "ksvd"; }
        std::string operator()(const TuckerBasis&) const { return "tucker"; }
    };
    return std::visit(Visitor{}, b);
}

namespace {

enum class BasisTag : std::uint32_t { Eof = 1, FourierEof = 2, Ksvd = 3, Tucker = 4 };

void write_basis_stream(std::ostream& os, const AnyBasis& basis) {
    put_bytes(os, kBasisMagic, 4);
    if (const auto* b = std::get_if<EofBasis>(&basis)) {
        put_u32(os, static_cast<std::uint32_t>(BasisTag::Eof));
        write_tensor(os, vector_to_tensor(b->mean));
        write_tensor(os, matrix_to_tensor(b->factors));
        write_tensor(os, vector_to_tensor(b->eigenvalues));
    } else if (const auto* b2 = std::get_if<FourierEofBasis>(&basis)) {
        put_u32(os, static_cast<std::uint32_t>(BasisTag::FourierEof));
        put_f64(os, b2->lx);
        put_f64(os, b2->ly);
        write_matrix_planes(os, b2->f1);
        write_matrix_planes(os, b2->f2);
        write_tensor(os, matrix_to_tensor(b2->eof));
        write_tensor(os, b2->mean_field);
    } else if (const auto* b3 = std::get_if<KsvdBasis>(&basis)) {
        put_u32(os, static_cast<std::uint32_t>(BasisTag::Ksvd));
        put_u32(os, static_cast<std::uint32_t>(b3->dictionary.sparsity));
        put_u64(os, b3->dictionary.train_objective.size());
        for (double v : b3->dictionary.train_objective) put_f64(os, v);
        write_tensor(os, matrix_to_tensor(b3->dictionary.atoms));
        write_tensor(os, vector_to_tensor(b3->mean));
    } else if (const auto* b4 = std::get_if<TuckerBasis>(&basis)) {
        put_u32(os, static_cast<std::uint32_t>(BasisTag::Tucker));
        put_u64(os, b4->fit_trace.size());
        for (double v : b4->fit_trace) put_f64(os, v);
        write_tensor(os, matrix_to_tensor(b4->b1));
        write_tensor(os, matrix_to_tensor(b4->b2));
        write_tensor(os, matrix_to_tensor(b4->b3));
        write_tensor(os, b4->mean_field);
    }
}

AnyBasis read_basis_stream(std::istream& is) {
    expect_magic(is, kBasisMagic, "BS01");
    const auto tag = static_cast<BasisTag>(get_u32(is, "basis header"));
    switch (tag) {
        case BasisTag::Eof: {
            EofBasis b;
            b.mean = tensor_to_vector(read_tensor(is), "eof mean");
            b.factors = tensor_to_matrix(read_tensor(is), "eof factors");
            b.eigenvalues = tensor_to_vector(read_tensor(is), "eof eigenvalues");
            return b;
        }
        case BasisTag::FourierEof: {
            FourierEofBasis b;
            b.lx = get_f64(is, "fourier lx");
            b.ly = get_f64(is, "fourier ly");
            b.f1 = read_matrix_planes(is, "fourier f1");
            b.f2 = read_matrix_planes(is, "fourier f2");
            b.eof = tensor_to_matrix(read_tensor(is), "fourier eof");
            b.mean_field = read_tensor(is);
            return b;
        }
        case BasisTag::Ksvd: {
            KsvdBasis b;
            b.dictionary.sparsity = static_cast<int>(get_u32(is, "ksvd sparsity"));
            const std::uint64_t n = get_u64(is, "ksvd objective length");
            b.dictionary.train_objective.resize(n);
            for (auto& v : b.dictionary.train_objective) v = get_f64(is, "ksvd objective");
            b.dictionary.atoms = tensor_to_matrix(read_tensor(is), "ksvd atoms");
            b.mean = tensor_to_vector(read_tensor(is), "ksvd mean");
            return b;
        }
        case BasisTag::Tucker: {
            TuckerBasis b;
            const std::uint64_t n = get_u64(is, "tucker trace length");
            b.fit_trace.resize(n);
            for (auto& v : b.fit_trace) v = get_f64(is, "tucker trace");
            b.b1 = tensor_to_matrix(read_tensor(is), "tucker b1");
            b.b2 = tensor_to_matrix(read_tensor(is), "tucker b2");
            b.b3 = tensor_to_matrix(read_tensor(is), "tucker b3");
            b.mean_field = read_tensor(is);
            return b;
        }
    }
    throw ParseError(ParseError::Kind::TypeTag,
                     "unknown basis type tag " + std::to_string(static_cast<std::uint32_t>(tag)));
}

}  // namespace

void write_basis(const std::filesystem::path& path, const AnyBasis& b) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw Error("write_basis: cannot open " + path.string());
    }
    write_basis_stream(os, b);
}

AnyBasis read_basis(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw Error("read_basis: cannot open " + path.string());
    }
    AnyBasis b = read_basis_stream(is);
    if (is.peek() != std::char_traits<char>::eof()) {
        throw ParseError(ParseError::Kind::PayloadMismatch,
                         path.string() + ": payload length mismatch (trailing bytes)");
    }
    return b;
}

// --------------------------------------------------------------------------
// JSON configuration
// --------------------------------------------------------------------------

namespace {

void warn_unknown_keys(const json& obj, const std::string& path,
                       std::initializer_list<const char*> known) {
    for (const auto& [key, value] : obj.items()) {
        bool found = false;
        for (const char* k : known) {
            if (key == k) {
                found = true;
                break;
            }
        }
        if (!found) {
            std::cerr << "config: warning: unknown key '" << (path.empty() ? key : path + "." + key)
                      << "' ignored\n";
        }
    }
}

double get_number(const json& obj, const std::string& path, const char* key, double fallback,
                  double min, double max) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    const std::string full = path.empty() ? key : path + "." + std::string(key);
    if (!v.is_number()) {
        throw ConfigError(full, full + ": expected a number");
    }
    const double d = v.get<double>();
    if (d < min || d > max) {
        throw ConfigError(full, full + ": value " + std::to_string(d) + " out of range [" +
                                    std::to_string(min) + ", " + std::to_string(max) + "]");
    }
    return d;
}

Index get_index(const json& obj, const std::string& path, const char* key, Index fallback,
                Index min) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    const std::string full = path.empty() ? key : path + "." + std::string(key);
    if (!v.is_number_integer()) {
        throw ConfigError(full, full + ": expected an integer");
    }
    const auto i = v.get<Index>();
    if (i < min) {
        throw ConfigError(full, full + ": value " + std::to_string(i) + " must be >= " +
                                    std::to_string(min));
    }
    return i;
}

Index require_index(const json& obj, const std::string& path, const char* key, Index min) {
    const std::string full = path.empty() ? key : path + "." + std::string(key);
    if (!obj.contains(key)) {
        throw ConfigError(full, full + ": missing required key");
    }
    return get_index(obj, path, key, /*fallback unused*/ min, min);
}

SsfGrid parse_grid(const json& obj, const std::string& path, const SsfGrid& defaults) {
    warn_unknown_keys(obj, path, {"m", "n", "i", "dx_km", "dy_km", "dz_m"});
    SsfGrid g = defaults;
    g.m = get_index(obj, path, "m", g.m, 1);
    g.n = get_index(obj, path, "n", g.n, 1);
    g.i = get_index(obj, path, "i", g.i, 1);
    g.dx_km = get_number(obj, path, "dx_km", g.dx_km, 1e-6, 1e6);
    g.dy_km = get_number(obj, path, "dy_km", g.dy_km, 1e-6, 1e6);
    g.dz_m = get_number(obj, path, "dz_m", g.dz_m, 1e-6, 1e9);
    return g;
}

GeneratorParams parse_generator(const json& obj, const std::string& path) {
    warn_unknown_keys(obj, path,
                      {"eddy_amplitude", "eddy_radius_km", "eddy_depth_m",
                       "eddy_vertical_scale_m", "eddy_orbit_radius_km", "eddy_orbit_period_days",
                       "perturbation_modes", "mode_amplitude", "ar_coefficient", "ar_innovation",
                       "seasonal_period_days", "seasonal_amplitude", "seasonal_phase_shift",
                       "noise_sigma"});
    GeneratorParams p;
    p.eddy_amplitude = get_number(obj, path, "eddy_amplitude", p.eddy_amplitude, 0.0, 50.0);
    p.eddy_radius_km = get_number(obj, path, "eddy_radius_km", p.eddy_radius_km, 1e-3, 1e4);
    p.eddy_depth_m = get_number(obj, path, "eddy_depth_m", p.eddy_depth_m, 0.0, 1e5);
    p.eddy_vertical_scale_m =
        get_number(obj, path, "eddy_vertical_scale_m", p.eddy_vertical_scale_m, 1e-3, 1e5);
    p.eddy_orbit_radius_km =
        get_number(obj, path, "eddy_orbit_radius_km", p.eddy_orbit_radius_km, 0.0, 1e4);
    p.eddy_orbit_period_days =
        get_number(obj, path, "eddy_orbit_period_days", p.eddy_orbit_period_days, 1e-3, 1e6);
    p.perturbation_modes =
        static_cast<int>(get_index(obj, path, "perturbation_modes", p.perturbation_modes, 0));
    if (p.perturbation_modes > 5) {
        throw ConfigError(path + ".perturbation_modes",
                          path + ".perturbation_modes: at most 5 modes are supported");
    }
    p.mode_amplitude = get_number(obj, path, "mode_amplitude", p.mode_amplitude, 0.0, 50.0);
    p.ar_coefficient = get_number(obj, path, "ar_coefficient", p.ar_coefficient, 0.0, 1.0);
    p.ar_innovation = get_number(obj, path, "ar_innovation", p.ar_innovation, 0.0, 10.0);
    p.seasonal_period_days =
        get_number(obj, path, "seasonal_period_days", p.seasonal_period_days, 1e-3, 1e6);
    p.seasonal_amplitude =
        get_number(obj, path, "seasonal_amplitude", p.seasonal_amplitude, 0.0, 10.0);
    p.seasonal_phase_shift =
        get_number(obj, path, "seasonal_phase_shift", p.seasonal_phase_shift, 0.0, 10.0);
    p.noise_sigma = get_number(obj, path, "noise_sigma", p.noise_sigma, 0.0, 10.0);
    return p;
}

MethodSpec parse_method(const json& obj, const std::string& path, const SsfGrid& grid) {
    if (!obj.contains("name")) {
        throw ConfigError(path + ".name", path + ".name: missing required key");
    }
    const std::string name = obj.at("name").get<std::string>();
    if (name == "hooi") {
        warn_unknown_keys(obj, path, {"name", "l1", "l2", "l3"});
        HooiSpec s;
        s.l1 = require_index(obj, path, "l1", 1);
        s.l2 = require_index(obj, path, "l2", 1);
        s.l3 = require_index(obj, path, "l3", 1);
        if (s.l1 > grid.m || s.l2 > grid.n || s.l3 > grid.i) {
            throw ConfigError(path, path + ": rank exceeds grid dimensions");
        }
        return MethodSpec{s};
    }
    if (name == "eof") {
        warn_unknown_keys(obj, path, {"name", "k"});
        EofSpec s;
        s.k = require_index(obj, path, "k", 1);
        if (s.k > grid.i) {
            throw ConfigError(path + ".k", path + ".k exceeds the depth dimension");
        }
        return MethodSpec{s};
    }
    if (name == "ksvd") {
        warn_unknown_keys(obj, path, {"name", "z", "t", "max_iter"});
        KsvdSpec s;
        s.z = require_index(obj, path, "z", 1);
        s.t = static_cast<int>(require_index(obj, path, "t", 1));
        s.max_iter = static_cast<int>(get_index(obj, path, "max_iter", s.max_iter, 1));
        if (s.z < grid.i) {
            throw ConfigError(path + ".z", path + ".z must be >= the depth dimension (over-complete)");
        }
        if (s.t > grid.i) {
            throw ConfigError(path + ".t", path + ".t exceeds the depth dimension");
        }
        return MethodSpec{s};
    }
    if (name == "fourier_eof") {
        warn_unknown_keys(obj, path, {"name", "nf1", "nf2", "kf", "lx", "ly"});
        FourierEofSpec s;
        s.nf1 = require_index(obj, path, "nf1", 1);
        s.nf2 = require_index(obj, path, "nf2", 1);
        s.kf = require_index(obj, path, "kf", 1);
        if (s.kf > grid.i) {
            throw ConfigError(path + ".kf", path + ".kf exceeds the depth dimension");
        }
        if (obj.contains("lx")) s.lx = get_number(obj, path, "lx", 0.0, 1e-6, 1e9);
        if (obj.contains("ly")) s.ly = get_number(obj, path, "ly", 0.0, 1e-6, 1e9);
        return MethodSpec{s};
    }
    throw ConfigError(path + ".name", path + ".name: unknown method '" + name + "'");
}

std::vector<std::array<Index, 3>> parse_triplets(const json& arr, const std::string& path) {
    std::vector<std::array<Index, 3>> out;
    for (size_t i = 0; i < arr.size(); ++i) {
        const json& t = arr.at(i);
        const std::string p = path + "[" + std::to_string(i) + "]";
        if (!t.is_array() || t.size() != 3) {
            throw ConfigError(p, p + ": expected [l1, l2, l3]");
        }
        std::array<Index, 3> v{};
        for (int k = 0; k < 3; ++k) {
            if (!t.at(k).is_number_integer() || t.at(k).get<Index>() < 1) {
                throw ConfigError(p, p + ": entries must be positive integers");
            }
            v[static_cast<size_t>(k)] = t.at(k).get<Index>();
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, const std::string& origin) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin, origin + ": invalid JSON: " + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError(origin, origin + ": top level must be an object");
    }
    warn_unknown_keys(root, "",
                      {"grid", "days", "seed", "train_days", "test_days", "generator", "methods",
                       "hooi_tol", "hooi_max_iter", "strict_paper", "timing_repeats", "sweep",
                       "multiseason", "out_dir"});

    ExperimentConfig cfg;
    if (root.contains("grid")) cfg.grid = parse_grid(root.at("grid"), "grid", SsfGrid{});
    cfg.days = static_cast<int>(get_index(root, "", "days", cfg.days, 2));
    if (root.contains("seed")) {
        if (!root.at("seed").is_number_unsigned() && !root.at("seed").is_number_integer()) {
            throw ConfigError("seed", "seed: expected an unsigned integer");
        }
        cfg.seed = root.at("seed").get<std::uint64_t>();
    }
    if (root.contains("train_days")) {
        cfg.train_days.clear();
        for (const auto& v : root.at("train_days")) {
            const int d = v.get<int>();
            if (d < 1 || d > cfg.days) {
                throw ConfigError("train_days", "train_days: day " + std::to_string(d) +
                                                    " outside 1..days");
            }
            cfg.train_days.push_back(d);
        }
        if (cfg.train_days.empty()) {
            throw ConfigError("train_days", "train_days: must not be empty");
        }
    }
    if (root.contains("test_days")) {
        for (const auto& v : root.at("test_days")) {
            const int d = v.get<int>();
            if (d < 1 || d > cfg.days) {
                throw ConfigError("test_days", "test_days: day " + std::to_string(d) +
                                                   " outside 1..days");
            }
            cfg.test_days.push_back(d);
        }
    }
    if (root.contains("generator")) cfg.generator = parse_generator(root.at("generator"), "generator");
    if (root.contains("methods")) {
        cfg.methods.clear();
        const json& arr = root.at("methods");
        if (!arr.is_array() || arr.empty()) {
            throw ConfigError("methods", "methods: expected a non-empty array");
        }
        for (size_t i = 0; i < arr.size(); ++i) {
            cfg.methods.push_back(
                parse_method(arr.at(i), "methods[" + std::to_string(i) + "]", cfg.grid));
        }
    } else {
        cfg.methods = ExperimentConfig::default_methods();
    }
    cfg.hooi_tol = get_number(root, "", "hooi_tol", cfg.hooi_tol, 0.0, 1.0);
    cfg.hooi_max_iter = static_cast<int>(get_index(root, "", "hooi_max_iter", cfg.hooi_max_iter, 1));
    if (root.contains("strict_paper")) {
        if (!root.at("strict_paper").is_boolean()) {
            throw ConfigError("strict_paper", "strict_paper: expected a boolean");
        }
        cfg.strict_paper = root.at("strict_paper").get<bool>();
    }
    cfg.timing_repeats =
        static_cast<int>(get_index(root, "", "timing_repeats", cfg.timing_repeats, 2));

    if (root.contains("sweep")) {
        const json& sw = root.at("sweep");
        warn_unknown_keys(sw, "sweep",
                          {"hooi_ranks", "fourier_sizes", "eof_ks", "ksvd_ts", "ksvd_z",
                           "ksvd_max_iter", "target_rmse_normalized"});
        if (sw.contains("hooi_ranks")) cfg.sweep.hooi_ranks = parse_triplets(sw.at("hooi_ranks"), "sweep.hooi_ranks");
        if (sw.contains("fourier_sizes"))
            cfg.sweep.fourier_sizes = parse_triplets(sw.at("fourier_sizes"), "sweep.fourier_sizes");
        if (sw.contains("eof_ks")) {
            cfg.sweep.eof_ks.clear();
            for (const auto& v : sw.at("eof_ks")) {
                const Index k = v.get<Index>();
                if (k < 1) throw ConfigError("sweep.eof_ks", "sweep.eof_ks: entries must be >= 1");
                cfg.sweep.eof_ks.push_back(k);
            }
        }
        if (sw.contains("ksvd_ts")) {
            cfg.sweep.ksvd_ts.clear();
            for (const auto& v : sw.at("ksvd_ts")) {
                const int t = v.get<int>();
                if (t < 1) throw ConfigError("sweep.ksvd_ts", "sweep.ksvd_ts: entries must be >= 1");
                cfg.sweep.ksvd_ts.push_back(t);
            }
        }
        cfg.sweep.ksvd_z = get_index(sw, "sweep", "ksvd_z", cfg.sweep.ksvd_z, 1);
        cfg.sweep.ksvd_max_iter =
            static_cast<int>(get_index(sw, "sweep", "ksvd_max_iter", cfg.sweep.ksvd_max_iter, 1));
        cfg.sweep.target_rmse_normalized = get_number(sw, "sweep", "target_rmse_normalized",
                                                      cfg.sweep.target_rmse_normalized, 0.0, 1e9);
    }

    if (root.contains("multiseason")) {
        const json& ms = root.at("multiseason");
        warn_unknown_keys(ms, "multiseason",
                          {"blocks", "spacing_days", "train_per_block", "test_per_block", "rank",
                           "grid"});
        cfg.multiseason.blocks = static_cast<int>(get_index(ms, "multiseason", "blocks",
                                                            cfg.multiseason.blocks, 1));
        cfg.multiseason.spacing_days = static_cast<int>(
            get_index(ms, "multiseason", "spacing_days", cfg.multiseason.spacing_days, 1));
        cfg.multiseason.train_per_block = static_cast<int>(
            get_index(ms, "multiseason", "train_per_block", cfg.multiseason.train_per_block, 1));
        cfg.multiseason.test_per_block = static_cast<int>(
            get_index(ms, "multiseason", "test_per_block", cfg.multiseason.test_per_block, 1));
        if (ms.contains("rank")) {
            auto triples = parse_triplets(json::array({ms.at("rank")}), "multiseason.rank");
            cfg.multiseason.rank = triples.front();
        }
        if (ms.contains("grid")) {
            cfg.multiseason.grid = parse_grid(ms.at("grid"), "multiseason.grid", cfg.multiseason.grid);
        }
        if (cfg.multiseason.rank[0] > cfg.multiseason.grid.m ||
            cfg.multiseason.rank[1] > cfg.multiseason.grid.n ||
            cfg.multiseason.rank[2] > cfg.multiseason.grid.i) {
            throw ConfigError("multiseason.rank", "multiseason.rank exceeds the block grid");
        }
    }

    if (root.contains("out_dir")) cfg.out_dir = root.at("out_dir").get<std::string>();
    return cfg;
}

ExperimentConfig read_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw ConfigError(path.string(), "read_config: cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config(buf.str(), path.string());
}

std::string config_to_json(const ExperimentConfig& c) {
    json root;
    root["grid"] = {{"m", c.grid.m},         {"n", c.grid.n},         {"i", c.grid.i},
                    {"dx_km", c.grid.dx_km}, {"dy_km", c.grid.dy_km}, {"dz_m", c.grid.dz_m}};
    root["days"] = c.days;
    root["seed"] = c.seed;
    root["train_days"] = c.train_days;
    root["test_days"] = c.test_days;
    const GeneratorParams& g = c.generator;
    root["generator"] = {{"eddy_amplitude", g.eddy_amplitude},
                         {"eddy_radius_km", g.eddy_radius_km},
                         {"eddy_depth_m", g.eddy_depth_m},
                         {"eddy_vertical_scale_m", g.eddy_vertical_scale_m},
                         {"eddy_orbit_radius_km", g.eddy_orbit_radius_km},
                         {"eddy_orbit_period_days", g.eddy_orbit_period_days},
                         {"perturbation_modes", g.perturbation_modes},
                         {"mode_amplitude", g.mode_amplitude},
                         {"ar_coefficient", g.ar_coefficient},
                         {"ar_innovation", g.ar_innovation},
                         {"seasonal_period_days", g.seasonal_period_days},
                         {"seasonal_amplitude", g.seasonal_amplitude},
                         {"seasonal_phase_shift", g.seasonal_phase_shift},
                         {"noise_sigma", g.noise_sigma}};
    root["methods"] = json::array();
    for (const auto& m : c.methods) {
        json entry;
        entry["name"] = m.name();
        if (const auto* h = std::get_if<HooiSpec>(&m.spec)) {
            entry["l1"] = h->l1;
            entry["l2"] = h->l2;
            entry["l3"] = h->l3;
        } else if (const auto* e = std::get_if<EofSpec>(&m.spec)) {
            entry["k"] = e->k;
        } else if (const auto* k = std::get_if<KsvdSpec>(&m.spec)) {
            entry["z"] = k->z;
            entry["t"] = k->t;
            entry["max_iter"] = k->max_iter;
        } else if (const auto* f = std::get_if<FourierEofSpec>(&m.spec)) {
            entry["nf1"] = f->nf1;
            entry["nf2"] = f->nf2;
            entry["kf"] = f->kf;
            if (f->lx) entry["lx"] = *f->lx;
            if (f->ly) entry["ly"] = *f->ly;
        }
        root["methods"].push_back(entry);
    }
    root["hooi_tol"] = c.hooi_tol;
    root["hooi_max_iter"] = c.hooi_max_iter;
    root["strict_paper"] = c.strict_paper;
    root["timing_repeats"] = c.timing_repeats;
    root["sweep"] = {{"hooi_ranks", c.sweep.hooi_ranks},
                     {"fourier_sizes", c.sweep.fourier_sizes},
                     {"eof_ks", c.sweep.eof_ks},
                     {"ksvd_ts", c.sweep.ksvd_ts},
                     {"ksvd_z", c.sweep.ksvd_z},
                     {"ksvd_max_iter", c.sweep.ksvd_max_iter},
                     {"target_rmse_normalized", c.sweep.target_rmse_normalized}};
    root["multiseason"] = {{"blocks", c.multiseason.blocks},
                           {"spacing_days", c.multiseason.spacing_days},
                           {"train_per_block", c.multiseason.train_per_block},
                           {"test_per_block", c.multiseason.test_per_block},
                           {"rank", c.multiseason.rank},
                           {"grid",
                            {{"m", c.multiseason.grid.m},
                             {"n", c.multiseason.grid.n},
                             {"i", c.multiseason.grid.i},
                             {"dx_km", c.multiseason.grid.dx_km},
                             {"dy_km", c.multiseason.grid.dy_km},
                             {"dz_m", c.multiseason.grid.dz_m}}}};
    root["out_dir"] = c.out_dir;
    return root.dump();
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    const std::string text = config_to_json(config);
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace ssf
