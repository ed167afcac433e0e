// SPDX-License-Identifier: Apache-2.0
#include "ssf/linalg.hpp"

#include "support/test_support.hpp"

#include <doctest.h>

using namespace ssf;
using namespace ssf::testing;

TEST_CASE("svd of simple matrices") {
    const auto id = svd(Eigen::MatrixXd(Eigen::MatrixXd::Identity(3, 3)));
    CHECK(id.singular_values.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(id.singular_values(i) == doctest::Approx(1.0));

    Eigen::MatrixXd d = Eigen::Vector3d(3.0, 2.0, 1.0).asDiagonal();
    const auto dec = svd(d);
    CHECK(dec.singular_values(0) == doctest::Approx(3.0));
    CHECK(dec.singular_values(1) == doctest::Approx(2.0));
    CHECK(dec.singular_values(2) == doctest::Approx(1.0));
    // Diagonal input: U and V are the identity under the sign convention.
    CHECK((dec.u - Eigen::MatrixXd::Identity(3, 3)).norm() <= 1e-12);
    CHECK((dec.v - Eigen::MatrixXd::Identity(3, 3)).norm() <= 1e-12);
}

TEST_CASE("svd reconstruction and orthonormality, real and complex") {
    TestRng rng(101);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::MatrixXd m = random_matrix(rng, 5 + static_cast<Index>(rng.below(4)),
                                                3 + static_cast<Index>(rng.below(5)));
        const auto dec = svd(m);
        const Eigen::MatrixXd rec = dec.u * dec.singular_values.asDiagonal() * dec.v.transpose();
        CHECK((m - rec).norm() <= 1e-10 * m.norm());
        const Index r = dec.u.cols();
        CHECK((dec.u.transpose() * dec.u - Eigen::MatrixXd::Identity(r, r)).norm() <= 1e-10);
        CHECK((dec.v.transpose() * dec.v - Eigen::MatrixXd::Identity(r, r)).norm() <= 1e-10);
        for (Index i = 1; i < dec.singular_values.size(); ++i) {
            CHECK(dec.singular_values(i) <= dec.singular_values(i - 1));
        }
    }
    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::MatrixXcd m = random_complex_matrix(rng, 6, 4);
        const auto dec = svd(m);
        const Eigen::MatrixXcd rec = dec.u * dec.singular_values.asDiagonal() *
                                     Eigen::MatrixXcd(dec.v.adjoint());
        CHECK((m - rec).norm() <= 1e-10 * m.norm());
        CHECK((Eigen::MatrixXcd(dec.u.adjoint() * dec.u) -
               Eigen::MatrixXcd::Identity(4, 4)).norm() <= 1e-10);
    }
}

TEST_CASE("svd singular values match the independent Jacobi eigen oracle") {
    TestRng rng(103);
    const Eigen::MatrixXd m = random_matrix(rng, 5, 3);
    const auto dec = svd(m);

    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    oracle_jacobi_eigen(m.transpose() * m, values, vectors);
    for (Index i = 0; i < 3; ++i) {
        CHECK(dec.singular_values(i) ==
              doctest::Approx(std::sqrt(std::max(values(i), 0.0))).epsilon(1e-8));
    }
}

TEST_CASE("svd rejects non-finite input") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(svd(m), DomainError);
}

TEST_CASE("singular values invariant under permutations") {
    TestRng rng(107);
    const Eigen::MatrixXd m = random_matrix(rng, 6, 4);
    Eigen::MatrixXd shuffled = m;
    shuffled.row(0).swap(shuffled.row(5));
    shuffled.col(1).swap(shuffled.col(3));
    const auto a = svd(m);
    const auto b = svd(shuffled);
    CHECK((a.singular_values - b.singular_values).norm() <= 1e-10 * a.singular_values.norm());
}

TEST_CASE("leading left singular vectors") {
    TestRng rng(109);

    SUBCASE("square orthogonal input reproduces itself up to sign") {
        const Eigen::MatrixXd q = random_orthonormal(rng, 5, 5);
        const auto lead = leading_left_singular_vectors(q, 5);
        CHECK_FALSE(lead.rank_deficient);
        // Compare projectors; the factorization is sign-ambiguous.
        CHECK((lead.u * lead.u.transpose() - q * q.transpose()).norm() <= 1e-9);
    }

    SUBCASE("rank-1 case") {
        Eigen::VectorXd u(4), v(3);
        u << 1, -2, 0.5, 3;
        v << 2, 1, -1;
        const Eigen::MatrixXd m = u * v.transpose();
        const auto lead = leading_left_singular_vectors(m, 1);
        const Eigen::VectorXd got = lead.u.col(0);
        const Eigen::VectorXd expected = u / u.norm();
        CHECK(std::min((got - expected).norm(), (got + expected).norm()) <= 1e-10);
    }

    SUBCASE("projector matches the full-SVD oracle") {
        const Eigen::MatrixXd m = random_matrix(rng, 6, 4);
        const auto lead = leading_left_singular_vectors(m, 2);
        const auto full = svd(m);
        const Eigen::MatrixXd pu = full.u.leftCols(2) * full.u.leftCols(2).transpose();
        CHECK((lead.u * lead.u.transpose() - pu).norm() <= 1e-9);
    }

    SUBCASE("deficient requests are completed and flagged") {
        Eigen::VectorXd u(4), v(3);
        u << 1, 0, 1, 0;
        v << 1, 1, 1;
        const auto lead = leading_left_singular_vectors(u * v.transpose(), 3);
        CHECK(lead.rank_deficient);
        CHECK((lead.u.transpose() * lead.u - Eigen::MatrixXd::Identity(3, 3)).norm() <= 1e-10);

        // r beyond min(rows, cols): null-space completion.
        const Eigen::MatrixXd tall = random_matrix(rng, 5, 2);
        const auto wide = leading_left_singular_vectors(tall, 4);
        CHECK(wide.rank_deficient);
        CHECK((wide.u.transpose() * wide.u - Eigen::MatrixXd::Identity(4, 4)).norm() <= 1e-10);
        CHECK_THROWS_AS(leading_left_singular_vectors(tall, 6), DomainError);
        CHECK_THROWS_AS(leading_left_singular_vectors(tall, 0), DomainError);
    }
}

TEST_CASE("pinv") {
    TestRng rng(113);

    SUBCASE("inverse of an invertible matrix") {
        const Eigen::MatrixXd m = random_matrix(rng, 4, 4) + 4.0 * Eigen::MatrixXd::Identity(4, 4);
        CHECK((pinv(m) - m.inverse()).norm() <= 1e-9 * m.inverse().norm());
    }

    SUBCASE("zero matrix maps to its transposed-shape zero") {
        const Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 5);
        const Eigen::MatrixXd p = pinv(z);
        CHECK(p.rows() == 5);
        CHECK(p.cols() == 3);
        CHECK(p.norm() == 0.0);
    }

    SUBCASE("full-column-rank case matches the normal-equations oracle") {
        const Eigen::MatrixXd m = random_matrix(rng, 6, 3);
        const Eigen::MatrixXd oracle = (m.transpose() * m).inverse() * m.transpose();
        CHECK((pinv(m) - oracle).norm() <= 1e-9 * oracle.norm());
    }

    SUBCASE("four Penrose identities, real and complex") {
        const Eigen::MatrixXd m = random_matrix(rng, 5, 7);
        const Eigen::MatrixXd p = pinv(m);
        const double scale = std::max(1.0, m.norm());
        CHECK((m * p * m - m).norm() <= 1e-9 * scale);
        CHECK((p * m * p - p).norm() <= 1e-9 * scale);
        CHECK(((m * p).transpose() - m * p).norm() <= 1e-9);
        CHECK(((p * m).transpose() - p * m).norm() <= 1e-9);

        const Eigen::MatrixXcd c = random_complex_matrix(rng, 4, 6);
        const Eigen::MatrixXcd pc = pinv(c);
        CHECK((c * pc * c - c).norm() <= 1e-9 * std::max(1.0, c.norm()));
        CHECK((Eigen::MatrixXcd((c * pc).adjoint()) - c * pc).norm() <= 1e-9);
        CHECK((Eigen::MatrixXcd((pc * c).adjoint()) - pc * c).norm() <= 1e-9);
    }

    SUBCASE("involution for well-conditioned matrices") {
        const Eigen::MatrixXd q1 = random_orthonormal(rng, 6, 4);
        const Eigen::MatrixXd q2 = random_orthonormal(rng, 4, 4);
        Eigen::VectorXd s(4);
        s << 2.0, 1.5, 1.0, 0.5;  // condition number 4
        const Eigen::MatrixXd m = q1 * s.asDiagonal() * q2.transpose();
        CHECK((pinv(pinv(m)) - m).norm() <= 1e-8 * m.norm());
    }
}

TEST_CASE("lstsq") {
    TestRng rng(127);

    SUBCASE("identity system") {
        const Eigen::MatrixXd b = random_matrix(rng, 4, 2);
        CHECK((lstsq(Eigen::MatrixXd::Identity(4, 4), b) - b).norm() <= 1e-12);
    }

    SUBCASE("consistent overdetermined system is solved exactly") {
        const Eigen::MatrixXd a = random_matrix(rng, 8, 3);
        const Eigen::MatrixXd x_true = random_matrix(rng, 3, 2);
        const Eigen::MatrixXd x = lstsq(a, a * x_true);
        CHECK((x - x_true).norm() <= 1e-9 * x_true.norm());
    }

    SUBCASE("residual is orthogonal to the column space") {
        const Eigen::MatrixXd a = random_matrix(rng, 8, 3);
        const Eigen::MatrixXd b = random_matrix(rng, 8, 2);
        const Eigen::MatrixXd x = lstsq(a, b);
        CHECK((a.transpose() * (a * x - b)).norm() <= 1e-9 * b.norm());
        CHECK((x - pinv(a) * b).norm() <= 1e-9 * x.norm());
    }

    SUBCASE("shape mismatch") {
        CHECK_THROWS_AS(lstsq(Eigen::MatrixXd::Zero(3, 2), Eigen::MatrixXd::Zero(4, 1)),
                        DomainError);
    }
}
