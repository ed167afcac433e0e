// SPDX-License-Identifier: Apache-2.0
#include "ssf/tensor.hpp"

#include "support/test_support.hpp"

#include <doctest.h>

using namespace ssf;
using namespace ssf::testing;

namespace {

// Definition-style index map, evaluated literally in 1-based form; the
// brute-force enumeration the unfolding tests compare against.
Index q_formula(const std::vector<Index>& j_1based, const std::vector<Index>& dims, Index p) {
    Index q = 1;
    Index stride = 1;  // I_k, built up in mode order skipping p
    for (size_t k = 0; k < dims.size(); ++k) {
        if (static_cast<Index>(k + 1) == p) continue;
        q += (j_1based[k] - 1) * stride;
        stride *= dims[k];
    }
    return q;
}

DenseTensor labeled_2x2x2() {
    // A[j1,j2,j3] = 100 j1 + 10 j2 + j3, 1-based.
    DenseTensor t{Shape({2, 2, 2})};
    for (Index j3 = 1; j3 <= 2; ++j3) {
        for (Index j2 = 1; j2 <= 2; ++j2) {
            for (Index j1 = 1; j1 <= 2; ++j1) {
                t.at({j1 - 1, j2 - 1, j3 - 1}) = static_cast<double>(100 * j1 + 10 * j2 + j3);
            }
        }
    }
    return t;
}

}  // namespace

TEST_CASE("shape validation") {
    CHECK_THROWS_AS(Shape(std::vector<Index>{}), DomainError);
    CHECK_THROWS_AS(Shape({3, 0, 2}), DomainError);
    CHECK_THROWS_AS(Shape({-1}), DomainError);
    CHECK_THROWS_AS(Shape({1'000'000'000, 1'000'000'000, 1'000'000'000}), ResourceError);
    CHECK(Shape({3, 4, 5}).element_count() == 60);
    CHECK(Shape({7}).order() == 1);
}

TEST_CASE("unfold dimension contract") {
    TestRng rng(11);
    const DenseTensor t = random_tensor(rng, Shape({3, 4, 5}));
    const Eigen::MatrixXd m = unfold(t, 2);
    CHECK(m.rows() == 4);
    CHECK(m.cols() == 15);
    CHECK_THROWS_AS(unfold(t, 0), DomainError);
    CHECK_THROWS_AS(unfold(t, 4), DomainError);
}

TEST_CASE("unfold matches the index formula enumerated by brute force") {
    const DenseTensor t = labeled_2x2x2();
    const std::vector<Index> dims{2, 2, 2};
    for (Index p = 1; p <= 3; ++p) {
        const Eigen::MatrixXd m = unfold(t, p);
        for (Index j1 = 1; j1 <= 2; ++j1) {
            for (Index j2 = 1; j2 <= 2; ++j2) {
                for (Index j3 = 1; j3 <= 2; ++j3) {
                    const std::vector<Index> j{j1, j2, j3};
                    const Index row = j[static_cast<size_t>(p - 1)];
                    const Index q = q_formula(j, dims, p);
                    CHECK(m(row - 1, q - 1) == t.at({j1 - 1, j2 - 1, j3 - 1}));
                }
            }
        }
    }
    // Frozen from the enumeration above: mode-3 unfolding row 1 enumerates
    // (j1, j2) with j1 fastest.
    const Eigen::MatrixXd m3 = unfold(t, 3);
    CHECK(m3(0, 0) == 111.0);
    CHECK(m3(0, 1) == 211.0);
    CHECK(m3(0, 2) == 121.0);
    CHECK(m3(0, 3) == 221.0);
    CHECK(m3(1, 0) == 112.0);
}

TEST_CASE("unfold literal formula agrees with permute-and-reshape") {
    TestRng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Index> dims;
        const auto order = static_cast<Index>(2 + rng.below(3));
        for (Index k = 0; k < order; ++k) dims.push_back(static_cast<Index>(1 + rng.below(5)));
        const DenseTensor t = random_tensor(rng, Shape(dims));
        for (Index p = 1; p <= order; ++p) {
            CHECK(unfold(t, p) == oracle_unfold(t, p));
        }
    }
}

TEST_CASE("fold inverts unfold bitwise") {
    TestRng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Index> dims;
        const auto order = static_cast<Index>(1 + rng.below(4));
        for (Index k = 0; k < order; ++k) dims.push_back(static_cast<Index>(1 + rng.below(6)));
        const DenseTensor t = random_tensor(rng, Shape(dims));
        const auto p = static_cast<Index>(1 + rng.below(static_cast<std::uint64_t>(order)));
        const DenseTensor back = fold(unfold(t, p), p, t.shape());
        CHECK(back == t);  // exact, bitwise
    }
}

TEST_CASE("fold shape contract and errors") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 15);
    const DenseTensor t = fold(m, 2, Shape({3, 4, 5}));
    CHECK(t.shape() == Shape({3, 4, 5}));
    CHECK_THROWS_AS(fold(m, 1, Shape({3, 4, 5})), DomainError);
    CHECK_THROWS_AS(fold(m, 2, Shape({3, 4, 4})), DomainError);
    const DenseTensor labeled = labeled_2x2x2();
    CHECK(fold(unfold(labeled, 3), 3, labeled.shape()) == labeled);
}

TEST_CASE("mode product identity and shape contract") {
    TestRng rng(31);
    const DenseTensor t = random_tensor(rng, Shape({3, 4, 5}));
    const DenseTensor same = mode_product(t, Eigen::MatrixXd::Identity(4, 4), 2);
    CHECK(same == t);

    const Eigen::MatrixXd m = random_matrix(rng, 2, 4);
    const DenseTensor r = mode_product(t, m, 2);
    CHECK(r.shape() == Shape({3, 2, 5}));
    CHECK_THROWS_AS(mode_product(t, m, 1), DomainError);
}

TEST_CASE("mode product equals matrix product of the unfolding") {
    TestRng rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const DenseTensor t = random_tensor(rng, Shape({3, 3, 3}));
        const Eigen::MatrixXd m = random_matrix(rng, 2, 3);
        for (Index p = 1; p <= 3; ++p) {
            const Eigen::MatrixXd lhs = unfold(mode_product(t, m, p), p);
            const Eigen::MatrixXd rhs = m * oracle_unfold(t, p);
            CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
        }
    }
}

TEST_CASE("mode products on distinct modes commute") {
    TestRng rng(41);
    const DenseTensor t = random_tensor(rng, Shape({4, 5, 6}));
    const Eigen::MatrixXd a = random_matrix(rng, 3, 4);
    const Eigen::MatrixXd b = random_matrix(rng, 2, 5);
    const DenseTensor ab = mode_product(mode_product(t, a, 1), b, 2);
    const DenseTensor ba = mode_product(mode_product(t, b, 2), a, 1);
    CHECK(frobenius_norm(ab) > 0.0);
    double diff = 0.0;
    for (size_t i = 0; i < ab.data().size(); ++i) {
        diff = std::max(diff, std::abs(ab.data()[i] - ba.data()[i]));
    }
    CHECK(diff <= 1e-12 * frobenius_norm(ab));
}

TEST_CASE("kronecker identities") {
    const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
    const Eigen::MatrixXd i3 = Eigen::MatrixXd::Identity(3, 3);
    CHECK((kronecker(i2, i3) - Eigen::MatrixXd::Identity(6, 6)).norm() == 0.0);

    Eigen::MatrixXd a(2, 1), b(2, 1);
    a << 1, 2;
    b << 3, 4;
    Eigen::MatrixXd expected(4, 1);
    expected << 3, 4, 6, 8;
    CHECK((kronecker(a, b) - expected).norm() == 0.0);
}

TEST_CASE("tucker reconstruction matches the kronecker route on every mode") {
    TestRng rng(43);
    const DenseTensor core = random_tensor(rng, Shape({2, 3, 2}));
    const Eigen::MatrixXd b1 = random_matrix(rng, 4, 2);
    const Eigen::MatrixXd b2 = random_matrix(rng, 5, 3);
    const Eigen::MatrixXd b3 = random_matrix(rng, 6, 2);
    const DenseTensor full =
        mode_product(mode_product(mode_product(core, b1, 1), b2, 2), b3, 3);

    const Eigen::MatrixXd lhs1 = unfold(full, 1);
    const Eigen::MatrixXd rhs1 = b1 * oracle_unfold(core, 1) * kronecker(b3, b2).transpose();
    CHECK((lhs1 - rhs1).norm() <= 1e-12 * rhs1.norm());

    const Eigen::MatrixXd lhs2 = unfold(full, 2);
    const Eigen::MatrixXd rhs2 = b2 * oracle_unfold(core, 2) * kronecker(b3, b1).transpose();
    CHECK((lhs2 - rhs2).norm() <= 1e-12 * rhs2.norm());

    const Eigen::MatrixXd lhs3 = unfold(full, 3);
    const Eigen::MatrixXd rhs3 = b3 * oracle_unfold(core, 3) * kronecker(b2, b1).transpose();
    CHECK((lhs3 - rhs3).norm() <= 1e-12 * rhs3.norm());
}

TEST_CASE("frobenius norm") {
    CHECK(frobenius_norm(DenseTensor::zeros(Shape({3, 2, 2}))) == 0.0);

    DenseTensor ones{Shape({2, 2, 4}), std::vector<double>(16, 1.0)};
    CHECK(frobenius_norm(ones) == doctest::Approx(4.0).epsilon(1e-15));

    TestRng rng(47);
    const DenseTensor t = random_tensor(rng, Shape({3, 4, 5}));
    const double n = frobenius_norm(t);
    for (Index p = 1; p <= 3; ++p) {
        CHECK(std::abs(unfold(t, p).norm() - n) <= 1e-12 * n);
    }
}

TEST_CASE("stack_mode4") {
    TestRng rng(53);
    const DenseTensor a = random_tensor(rng, Shape({2, 2, 2}));
    const DenseTensor b = random_tensor(rng, Shape({2, 2, 2}));
    const DenseTensor c = random_tensor(rng, Shape({2, 2, 2}));

    SUBCASE("degenerate single stack") {
        const DenseTensor s = stack_mode4(std::vector<DenseTensor>{a});
        CHECK(s.shape() == Shape({2, 2, 2, 1}));
        for (Index i = 0; i < a.size(); ++i) CHECK(s[i] == a[i]);
    }

    SUBCASE("identical inputs give identical slices") {
        const DenseTensor s = stack_mode4(std::vector<DenseTensor>{a, a});
        const Eigen::MatrixXd m4 = unfold(s, 4);
        CHECK((m4.row(0) - m4.row(1)).norm() == 0.0);
    }

    SUBCASE("mode-4 unfolding rows are the vectorized tensors") {
        const DenseTensor s = stack_mode4(std::vector<DenseTensor>{a, b, c});
        const Eigen::MatrixXd m4 = unfold(s, 4);
        REQUIRE(m4.rows() == 3);
        const DenseTensor* inputs[3] = {&a, &b, &c};
        for (Index t = 0; t < 3; ++t) {
            for (Index k = 0; k < 8; ++k) {
                CHECK(m4(t, k) == (*inputs[static_cast<size_t>(t)])[k]);
            }
        }
    }

    SUBCASE("errors") {
        CHECK_THROWS_AS(stack_mode4(std::vector<DenseTensor>{}), DomainError);
        const DenseTensor wrong = random_tensor(rng, Shape({2, 2, 3}));
        CHECK_THROWS_AS(stack_mode4(std::vector<DenseTensor>{a, wrong}), DomainError);
    }
}
