#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bnck/courant.hpp"
#include "support/corpus.hpp"

using namespace bnck;

namespace {
BnElement elem(size_t n, std::vector<Scalar> x, std::vector<Scalar> xi, Scalar l) {
    return BnElement::from_parts(x, xi, l);
}
std::vector<Scalar> zeros(size_t n) { return std::vector<Scalar>(n, Scalar(0)); }
std::vector<Scalar> ei(size_t n, size_t i) {
    auto v = zeros(n);
    v[i] = Scalar(1);
    return v;
}
}  // namespace

TEST_CASE("scalar product values and signature") {
    size_t n = 2;
    // <e1 + e1* + 1, e1 + e1* + 1> = 2
    BnElement u = elem(n, ei(n, 0), ei(n, 0), Scalar(1));
    CHECK(scalar_product(u, u) == Scalar(2));
    // isotropic tangent vector
    BnElement t = elem(n, ei(n, 0), zeros(n), Scalar(0));
    CHECK(scalar_product(t, t) == Scalar(0));
    // <X - g(X), X - g(X)> = -g(X,X) for a random metric
    PseudoMetric g(RMatrix{{Scalar(2), Scalar(1)}, {Scalar(1), Scalar(3)}});
    std::vector<Scalar> X = {Scalar(1, 2), Scalar(-2)};
    auto flat = g.flat(X);
    for (auto& v : flat) v = -v;
    BnElement s = elem(n, X, flat, Scalar(0));
    CHECK(scalar_product(s, s) == -g.inner(X, X));
    // signature (n+1, n) of the Gram matrix, dims 1..4
    for (size_t m = 1; m <= 4; ++m) {
        auto [pos, neg] = symmetric_signature(pairing_gram(m));
        CHECK(pos == (int)m + 1);
        CHECK(neg == (int)m);
    }
}

TEST_CASE("twist condition is enforced at construction") {
    // dim 4 abelian with F^F != 0 and H = 0 violates dH = -F^F
    LieAlgebra ab(4);
    KForm F(4, 2);
    F.set_term({0, 1}, Scalar(1));
    F.set_term({2, 3}, Scalar(1));
    CHECK_THROWS_AS(BnAlgebroid(ab, KForm(4, 3), F), std::invalid_argument);
    // non-closed F rejected
    LieAlgebra s = corpus::sol2();
    KForm F2(2, 2);
    F2.set_term({0, 1}, Scalar(1));
    // d(w1*^w2*) on sol2: d(e12*)(...) nonzero? [w1,w2] = w2: dF2 is a 3-form on dim 2 = 0,
    // so this F is closed; the constructor must accept it.
    CHECK_NOTHROW(BnAlgebroid(s, KForm(2, 3), F2));
    // corrupted Jacobi rejected
    LieAlgebra bad(3);
    bad.set_bracket(0, 1, 0, Scalar(1));
    bad.set_bracket(0, 2, 1, Scalar(1));
    CHECK_THROWS_AS(BnAlgebroid::untwisted(bad), std::invalid_argument);
}

TEST_CASE("dorfman bracket worked examples") {
    SECTION("abelian, H = 0, F = e1*^e2*: [e1, e2] = 0 + 0 + 1") {
        LieAlgebra ab(2);
        KForm F(2, 2);
        F.set_term({0, 1}, Scalar(1));
        BnAlgebroid A(ab, KForm(2, 3), F);
        BnElement r = A.dorfman(elem(2, ei(2, 0), zeros(2), Scalar(0)),
                                elem(2, ei(2, 1), zeros(2), Scalar(0)));
        CHECK(r == elem(2, zeros(2), zeros(2), Scalar(1)));
    }
    SECTION("abelian, F = e1*^e2*: [1, e1] = 0 + 2e2* + 0") {
        LieAlgebra ab(2);
        KForm F(2, 2);
        F.set_term({0, 1}, Scalar(1));
        BnAlgebroid A(ab, KForm(2, 3), F);
        BnElement r = A.dorfman(elem(2, zeros(2), zeros(2), Scalar(1)),
                                elem(2, ei(2, 0), zeros(2), Scalar(0)));
        std::vector<Scalar> two_e2 = {Scalar(0), Scalar(2)};
        CHECK(r == elem(2, zeros(2), two_e2, Scalar(0)));
    }
    SECTION("so(3)-type with H = -e1*^e2*^e3*: 1-form part of [e1,e2]") {
        LieAlgebra so3 = corpus::so3_like(Scalar(1), Scalar(1), Scalar(1), 1, 1, 1);
        KForm H(3, 3);
        H.set_term({0, 1, 2}, Scalar(-1));
        BnAlgebroid A(so3, H, KForm(3, 2));
        BnElement r = A.dorfman(elem(3, ei(3, 0), zeros(3), Scalar(0)),
                                elem(3, ei(3, 1), zeros(3), Scalar(0)));
        // vector part [e1,e2] = e3; 1-form part -H(e1,e2,.) = +e3*
        CHECK(r.vector_part() == ei(3, 2));
        CHECK(r.covector_part() == ei(3, 2));
        CHECK(r.r().is_zero());
    }
}

TEST_CASE("axioms: abelian dim 2 with F = e1*^e2*, exhaustively over 5^3 triples") {
    LieAlgebra ab(2);
    KForm F(2, 2);
    F.set_term({0, 1}, Scalar(1));
    BnAlgebroid A(ab, KForm(2, 3), F);
    CHECK(A.check_axioms().pass());
}

TEST_CASE("axioms hold on catalog algebroids and random twists") {
    std::mt19937_64 rng(140914);
    for (size_t n : {2u, 3u, 4u}) {
        for (auto& L : corpus::pool_dim(n)) {
            BnAlgebroid A = corpus::random_algebroid(L, rng);
            Report rep = A.check_axioms();
            INFO("dim " << n << ": " << rep.summary());
            CHECK(rep.pass());
        }
    }
    // genuinely twisted dim-4 instance: F = a u*^e1* + b e2*^e3*, H = 2ab e123*
    LieAlgebra L = corpus::dim4_nonunimodular();
    KForm F(4, 2), H(4, 3);
    Scalar a(2), b(3, 2);
    F.set_term({0, 1}, a);
    F.set_term({2, 3}, b);
    H.set_term({1, 2, 3}, Scalar(2) * a * b);
    REQUIRE((ce_differential(L, H) + wedge(F, F)).coeff({0, 1, 2, 3}).is_zero());
    REQUIRE_FALSE(ce_differential(L, H).is_zero());  // dH != 0: honestly twisted
    BnAlgebroid A(L, H, F);
    CHECK(A.check_axioms().pass());
}

TEST_CASE("C5 for random rational sections") {
    std::mt19937_64 rng(365);
    LieAlgebra L = corpus::so3_like(Scalar(1), Scalar(2), Scalar(1), 1, 1, 1);
    BnAlgebroid A = corpus::random_algebroid(L, rng);
    for (int t = 0; t < 30; ++t) {
        std::vector<Scalar> c(7), c2(7);
        for (auto& v : c) v = corpus::rnd_rational(rng);
        for (auto& v : c2) v = corpus::rnd_rational(rng);
        BnElement u(3, c), v(3, c2);
        CHECK(scalar_product(A.dorfman(u, u), v).is_zero());
    }
}

TEST_CASE("dorfman lie derivative") {
    std::mt19937_64 rng(5883);
    LieAlgebra L = corpus::heisenberg3();
    BnAlgebroid A = corpus::random_algebroid(L, rng);
    size_t r = A.rank();
    std::vector<Scalar> c(r);
    for (auto& v : c) v = corpus::rnd_rational(rng);
    BnElement u(3, c);
    CHECK(A.dorfman_lie_derivative(u, RMatrix::identity(r)).is_zero());
    CHECK(A.dorfman_lie_derivative(BnElement(3), RMatrix::identity(r) * RMatrix::identity(r)).is_zero());
    // derivation over composition: L_u(ST) = (L_u S)T + S(L_u T)
    RMatrix S(r, r), T(r, r);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j) {
            S(i, j) = corpus::rnd_rational(rng, -2, 2);
            T(i, j) = corpus::rnd_rational(rng, -2, 2);
        }
    RMatrix lhs = A.dorfman_lie_derivative(u, S * T);
    RMatrix rhs = A.dorfman_lie_derivative(u, S) * T + S * A.dorfman_lie_derivative(u, T);
    CHECK(lhs == rhs);
}

TEST_CASE("twist isomorphism") {
    SECTION("b = 0, A = 0 is the identity") {
        LieAlgebra ab(2);
        BnAlgebroid A = BnAlgebroid::untwisted(ab);
        auto [I, twisted] = twist_isomorphism(A, KForm(2, 2), KForm(2, 1));
        CHECK(I == RMatrix::identity(5));
        CHECK(twisted.H().is_zero());
        CHECK(twisted.F().is_zero());
    }
    SECTION("abelian with b = e1*^e2*: I(e1) = e1 - e2*") {
        LieAlgebra ab(2);
        BnAlgebroid A = BnAlgebroid::untwisted(ab);
        KForm b(2, 2);
        b.set_term({0, 1}, Scalar(1));
        auto [I, twisted] = twist_isomorphism(A, b, KForm(2, 1));
        CHECK(twisted.H().is_zero());
        BnElement e1 = A.basis_section(0);
        BnElement img = apply_endo(I, e1);
        std::vector<Scalar> want = {Scalar(0), Scalar(-1)};
        CHECK(img.vector_part() == ei(2, 0));
        CHECK(img.covector_part() == want);
        CHECK(img.r().is_zero());
    }
    SECTION("abelian with A = e1*: F~ = 0, I(1) = 2 e1* + 1") {
        LieAlgebra ab(2);
        BnAlgebroid A = BnAlgebroid::untwisted(ab);
        KForm a1(2, 1);
        a1.set_term({0}, Scalar(1));
        auto [I, twisted] = twist_isomorphism(A, KForm(2, 2), a1);
        CHECK(twisted.F().is_zero());
        BnElement one = A.basis_section(4);
        BnElement img = apply_endo(I, one);
        std::vector<Scalar> want = {Scalar(2), Scalar(0)};
        CHECK(img.vector_part() == zeros(2));
        CHECK(img.covector_part() == want);
        CHECK(img.r() == Scalar(1));
    }
    SECTION("orthogonality and bracket intertwining on random (b, A)") {
        std::mt19937_64 rng(112233);
        for (size_t n : {2u, 3u, 4u})
            for (auto& L : corpus::pool_dim(n)) {
                BnAlgebroid A = corpus::random_algebroid(L, rng);
                KForm b(n, 2), a1(n, 1);
                for (auto& I2 : bnck::detail::combos(n, 2)) b.set_term(I2, corpus::rnd_rational(rng, -2, 2));
                for (size_t i = 0; i < n; ++i) a1.set_term({i}, corpus::rnd_rational(rng, -2, 2));
                auto [I, twisted] = twist_isomorphism(A, b, a1);
                size_t r = A.rank();
                for (size_t p = 0; p < r; ++p)
                    for (size_t q = 0; q < r; ++q) {
                        BnElement u = A.basis_section(p), v = A.basis_section(q);
                        CHECK(scalar_product(apply_endo(I, u), apply_endo(I, v)) == scalar_product(u, v));
                        BnElement lhs = apply_endo(I, A.dorfman(u, v));
                        BnElement rhs = twisted.dorfman(apply_endo(I, u), apply_endo(I, v));
                        CHECK(lhs == rhs);
                    }
            }
    }
}

TEST_CASE("pairing skewness predicate") {
    size_t n = 2;
    RMatrix G = pairing_gram(n);
    CHECK_FALSE(pairing_skew(n, RMatrix::identity(2 * n + 1)));
    // build a skew one: M = G^{-1} K with K antisymmetric
    RMatrix K(5, 5);
    K(0, 1) = Scalar(1);
    K(1, 0) = Scalar(-1);
    K(2, 4) = Scalar(3);
    K(4, 2) = Scalar(-3);
    CHECK(pairing_skew(n, G.inverse() * K));
}
