#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bnck/linalg.hpp"

using namespace bnck;

namespace {
CScalar rc(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-6, 6);
    std::uniform_int_distribution<long> den(1, 4);
    return CScalar(Scalar(num(rng), den(rng)), Scalar(num(rng), den(rng)));
}
CMatrix random_cmatrix(std::mt19937_64& rng, size_t r, size_t c) {
    CMatrix m(r, c);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) m(i, j) = rc(rng);
    return m;
}
const CScalar I = CScalar::i();
}  // namespace

TEST_CASE("rref identity and proportional rows") {
    CMatrix id = CMatrix::identity(3);
    auto [r, rank] = rref(id);
    CHECK(rank == 3);
    CHECK(r == id);

    CMatrix m{{CScalar(1), CScalar(2)}, {CScalar(2), CScalar(4)}};
    CHECK(rref(m).second == 1);
}

TEST_CASE("rref of [[1, i], [-i, 1]] has rank 1") {
    // row2 = -i row1: hand elimination gives a single pivot row (1, i)
    CMatrix m{{CScalar(1), I}, {-I, CScalar(1)}};
    auto [r, rank] = rref(m);
    CHECK(rank == 1);
    CHECK(r(0, 0) == CScalar(1));
    CHECK(r(0, 1) == I);
}

TEST_CASE("rref is idempotent on random complex matrices") {
    std::mt19937_64 rng(777);
    for (int t = 0; t < 60; ++t) {
        std::uniform_int_distribution<size_t> dim(1, 6);
        CMatrix m = random_cmatrix(rng, dim(rng), dim(rng));
        auto [r1, k1] = rref(m);
        auto [r2, k2] = rref(r1);
        CHECK(r1 == r2);
        CHECK(k1 == k2);
    }
}

TEST_CASE("eigenspace examples") {
    CMatrix rot{{CScalar(0), CScalar(Scalar(-1))}, {CScalar(1), CScalar(0)}};
    Subspace s = eigenspace(rot, I);
    REQUIRE(s.rank() == 1);
    // span{(1, -i)}
    CHECK(s.contains({CScalar(1), -I}));
    CHECK_FALSE(s.contains({CScalar(1), I}));

    CHECK(eigenspace(CMatrix::identity(4), CScalar(1)).rank() == 4);
    CHECK(eigenspace(rot, CScalar(2)).rank() == 0);
}

TEST_CASE("eigenvector membership closure for constructed eigenpairs") {
    std::mt19937_64 rng(12345);
    for (int t = 0; t < 40; ++t) {
        // m = P diag(lambda, mu, nu) P^{-1} has P e1 as a lambda-eigenvector
        CMatrix P(3, 3);
        do {
            P = random_cmatrix(rng, 3, 3);
        } while (P.det().is_zero());
        CScalar lambda = rc(rng);
        CMatrix D(3, 3);
        D(0, 0) = lambda;
        D(1, 1) = lambda + CScalar(1);
        D(2, 2) = rc(rng);
        CMatrix m = P * D * P.inverse();
        std::vector<CScalar> v = {P(0, 0), P(1, 0), P(2, 0)};
        auto mv = m.apply(v);
        for (size_t i = 0; i < 3; ++i) CHECK(mv[i] == lambda * v[i]);
        CHECK(eigenspace(m, lambda).contains(v));
    }
}

TEST_CASE("subspace intersection") {
    auto e = [](size_t i) {
        std::vector<CScalar> v(3, CScalar(Scalar(0)));
        v[i] = CScalar(1);
        return v;
    };
    CMatrix a(0, 3), b(0, 3);
    a.append_row(e(0));
    a.append_row(e(1));
    b.append_row(e(1));
    b.append_row(e(2));
    Subspace A(3, a), B(3, b);
    Subspace AB = intersect(A, B);
    CHECK(AB.rank() == 1);
    CHECK(AB.contains(e(1)));
    CHECK(intersect(A, A) == A);

    // span{(1,i)} and span{(1,-i)} meet only in 0: the stacked determinant
    // det [[1, i], [1, -i]] = -2i is nonzero
    CMatrix c(1, 2), d(1, 2);
    c(0, 0) = CScalar(1);
    c(0, 1) = I;
    d(0, 0) = CScalar(1);
    d(0, 1) = -I;
    CMatrix stacked(2, 2);
    stacked(0, 0) = c(0, 0);
    stacked(0, 1) = c(0, 1);
    stacked(1, 0) = d(0, 0);
    stacked(1, 1) = d(0, 1);
    REQUIRE_FALSE(stacked.det().is_zero());
    CHECK(intersect(Subspace(2, c), Subspace(2, d)).rank() == 0);
}

TEST_CASE("rank identity rank(a cap b) + rank(a + b) = rank a + rank b") {
    std::mt19937_64 rng(4242);
    for (int t = 0; t < 40; ++t) {
        std::uniform_int_distribution<size_t> dim(1, 3);
        Subspace a(5, random_cmatrix(rng, dim(rng), 5));
        Subspace b(5, random_cmatrix(rng, dim(rng), 5));
        CHECK(intersect(a, b).rank() + sum(a, b).rank() == a.rank() + b.rank());
    }
}

TEST_CASE("kernel vectors are killed by the matrix") {
    std::mt19937_64 rng(31337);
    for (int t = 0; t < 30; ++t) {
        CMatrix m = random_cmatrix(rng, 3, 5);
        CMatrix k = m.kernel();
        CHECK(k.rows() >= 2);
        for (size_t r = 0; r < k.rows(); ++r) {
            auto img = m.apply(k.row(r));
            for (auto& v : img) CHECK(v.is_zero());
        }
    }
}

TEST_CASE("dimension mismatch is reported") {
    CHECK_THROWS_AS(intersect(Subspace(2), Subspace(3)), std::invalid_argument);
}
