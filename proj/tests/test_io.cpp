// SPDX-License-Identifier: Apache-2.0
#include "ssf/io.hpp"

#include "support/test_support.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <unistd.h>

using namespace ssf;
using namespace ssf::testing;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("ssf_io_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

bool bit_equal(const DenseTensor& a, const DenseTensor& b) {
    if (a.shape() != b.shape()) return false;
    return std::memcmp(a.data().data(), b.data().data(), a.data().size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("dt01 round trip is bit exact") {
    TempDir dir;
    TestRng rng(501);
    DenseTensor t = random_tensor(rng, Shape({3, 3, 3}));
    t[0] = -0.0;  // signed zero must survive
    t[1] = std::numeric_limits<double>::denorm_min();
    const auto file = dir.path / "t.dt01";
    write_tensor(file, t);
    CHECK(bit_equal(read_tensor(file), t));

    const DenseTensor v = random_tensor(rng, Shape({7}));
    write_tensor(dir.path / "v.dt01", v);
    CHECK(bit_equal(read_tensor(dir.path / "v.dt01"), v));
}

TEST_CASE("dt01 malformed inputs raise typed parse errors") {
    TempDir dir;

    SUBCASE("empty file: bad magic") {
        const auto file = dir.path / "empty.dt01";
        std::ofstream(file, std::ios::binary).close();
        try {
            read_tensor(file);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.kind() == ParseError::Kind::BadMagic);
        }
    }

    SUBCASE("wrong magic") {
        const auto file = dir.path / "wrong.dt01";
        std::ofstream os(file, std::ios::binary);
        os << "NOPE and then some";
        os.close();
        try {
            read_tensor(file);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.kind() == ParseError::Kind::BadMagic);
        }
    }

    SUBCASE("truncated header") {
        const auto file = dir.path / "trunc.dt01";
        std::ofstream os(file, std::ios::binary);
        os << "DT01";
        os.put(3);  // half a u32
        os.close();
        try {
            read_tensor(file);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.kind() == ParseError::Kind::Truncated);
        }
    }

    SUBCASE("declared dims disagree with the payload") {
        // 2x2x2 declared, 7 doubles present.
        const auto file = dir.path / "short.dt01";
        {
            TestRng rng(502);
            const DenseTensor t = random_tensor(rng, Shape({2, 2, 2}));
            write_tensor(file, t);
        }
        std::filesystem::resize_file(file, std::filesystem::file_size(file) - 8);
        try {
            read_tensor(file);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.kind() == ParseError::Kind::PayloadMismatch);
            CHECK(std::string(e.what()).find("payload length mismatch") != std::string::npos);
        }
    }

    SUBCASE("trailing bytes") {
        const auto file = dir.path / "long.dt01";
        {
            TestRng rng(503);
            write_tensor(file, random_tensor(rng, Shape({2, 2})));
        }
        std::ofstream os(file, std::ios::binary | std::ios::app);
        os.put(0);
        os.close();
        try {
            read_tensor(file);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.kind() == ParseError::Kind::PayloadMismatch);
        }
    }

    SUBCASE("zero dimension") {
        const auto file = dir.path / "zero.dt01";
        std::ofstream os(file, std::ios::binary);
        os << "DT01";
        const unsigned char order[4] = {1, 0, 0, 0};
        os.write(reinterpret_cast<const char*>(order), 4);
        const unsigned char dim[8] = {0, 0, 0, 0, 0, 0, 0, 0};
        os.write(reinterpret_cast<const char*>(dim), 8);
        os.close();
        try {
            read_tensor(file);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.kind() == ParseError::Kind::BadValue);
        }
    }
}

TEST_CASE("basis containers round trip bit exactly") {
    TempDir dir;
    TestRng rng(507);

    SUBCASE("eof basis") {
        EofBasis b = learn_eof(random_matrix(rng, 6, 12), 3);
        b.mean = random_matrix(rng, 6, 1);
        write_basis(dir.path / "b.bs01", b);
        const auto back = read_basis_as<EofBasis>(dir.path / "b.bs01");
        CHECK((back.mean - b.mean).norm() == 0.0);
        CHECK((back.factors - b.factors).norm() == 0.0);
        CHECK((back.eigenvalues - b.eigenvalues).norm() == 0.0);
        // Projector distance is identically zero on a bit-exact round trip.
        CHECK((back.factors * back.factors.transpose() -
               b.factors * b.factors.transpose()).norm() == 0.0);
    }

    SUBCASE("fourier-eof basis preserves both complex planes") {
        const DenseTensor x = random_tensor(rng, Shape({5, 4, 6}));
        FourierEofBasis b = learn_fourier_eof(x, 3, 2, 3, 5.0, 4.0);
        b.mean_field = random_tensor(rng, Shape({5, 4, 6}));
        write_basis(dir.path / "f.bs01", b);
        const auto back = read_basis_as<FourierEofBasis>(dir.path / "f.bs01");
        CHECK((back.f1 - b.f1).norm() == 0.0);
        CHECK((back.f2 - b.f2).norm() == 0.0);
        CHECK((back.eof - b.eof).norm() == 0.0);
        CHECK(back.lx == b.lx);
        CHECK(back.ly == b.ly);
        CHECK(bit_equal(back.mean_field, b.mean_field));
    }

    SUBCASE("ksvd basis") {
        KsvdOptions opts;
        opts.max_iter = 4;
        auto [dict, code] = ksvd_learn(random_matrix(rng, 6, 24), 8, 2, opts, 17);
        KsvdBasis b{std::move(dict), random_matrix(rng, 6, 1)};
        write_basis(dir.path / "k.bs01", b);
        const auto back = read_basis_as<KsvdBasis>(dir.path / "k.bs01");
        CHECK((back.dictionary.atoms - b.dictionary.atoms).norm() == 0.0);
        CHECK(back.dictionary.sparsity == b.dictionary.sparsity);
        CHECK(back.dictionary.train_objective == b.dictionary.train_objective);
        CHECK((back.mean - b.mean).norm() == 0.0);
    }

    SUBCASE("tucker basis") {
        const DenseTensor x = random_tensor(rng, Shape({5, 4, 6}));
        HooiResult r = hooi(x, {2, 2, 3});
        write_basis(dir.path / "t.bs01", r.basis);
        const auto back = read_basis_as<TuckerBasis>(dir.path / "t.bs01");
        CHECK((back.b1 - r.basis.b1).norm() == 0.0);
        CHECK((back.b2 - r.basis.b2).norm() == 0.0);
        CHECK((back.b3 - r.basis.b3).norm() == 0.0);
        CHECK(back.fit_trace == r.basis.fit_trace);
        CHECK(bit_equal(back.mean_field, r.basis.mean_field));
    }

    SUBCASE("reading with the wrong type raises a type-tag error") {
        EofBasis b = learn_eof(random_matrix(rng, 6, 12), 2);
        write_basis(dir.path / "e.bs01", b);
        try {
            read_basis_as<TuckerBasis>(dir.path / "e.bs01");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.kind() == ParseError::Kind::TypeTag);
        }
    }
}

TEST_CASE("config parsing") {
    SUBCASE("minimal config fills documented defaults") {
        const ExperimentConfig cfg = parse_config("{}");
        CHECK(cfg.grid.m == 20);
        CHECK(cfg.grid.n == 20);
        CHECK(cfg.grid.i == 300);
        CHECK(cfg.days == 30);
        CHECK(cfg.train_days == std::vector<int>{1});
        REQUIRE(cfg.methods.size() == 4);
        CHECK(cfg.methods[0].name() == "hooi");
        CHECK(cfg.methods[1].name() == "eof");
        CHECK(cfg.methods[2].name() == "ksvd");
        CHECK(cfg.methods[3].name() == "fourier_eof");
        CHECK(cfg.hooi_tol == 1e-8);
        CHECK_FALSE(cfg.strict_paper);
    }

    SUBCASE("invalid values name the offending field") {
        try {
            parse_config(R"({"methods": [{"name": "hooi", "l1": -2, "l2": 2, "l3": 2}]})");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.key() == "methods[0].l1");
        }
        try {
            parse_config(R"({"methods": [{"name": "eof"}]})");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.key() == "methods[0].k");
        }
        CHECK_THROWS_AS(parse_config("{\"days\": 1}"), ConfigError);
        CHECK_THROWS_AS(parse_config("not json at all"), ConfigError);
    }

    SUBCASE("shipped case1 config reproduces the equal-budget hyper-parameters") {
        const ExperimentConfig cfg = read_config(std::filesystem::path(SSF_SOURCE_DIR) /
                                                 "configs/case1.json");
        REQUIRE(cfg.methods.size() >= 4);
        const auto& hooi = std::get<HooiSpec>(cfg.methods[0].spec);
        CHECK(hooi.l1 == 8);
        CHECK(hooi.l2 == 8);
        CHECK(hooi.l3 == 10);
        const auto& eof = std::get<EofSpec>(cfg.methods[1].spec);
        CHECK(eof.k == 2);
        const auto& ksvd = std::get<KsvdSpec>(cfg.methods[2].spec);
        CHECK(ksvd.z == 320);
        CHECK(ksvd.t == 2);
        const auto& fourier = std::get<FourierEofSpec>(cfg.methods[3].spec);
        CHECK(fourier.nf1 == 8);
        CHECK(fourier.nf2 == 8);
        CHECK(fourier.kf == 10);
    }

    SUBCASE("hash is stable and sensitive") {
        const ExperimentConfig a = parse_config("{}");
        const ExperimentConfig b = parse_config("{}");
        CHECK(config_hash(a) == config_hash(b));
        const ExperimentConfig c = parse_config(R"({"seed": 99})");
        CHECK(config_hash(a) != config_hash(c));
    }
}
