#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bnck/structures.hpp"
#include "support/corpus.hpp"

using namespace bnck;

namespace {
std::vector<Scalar> zeros(size_t n) { return std::vector<Scalar>(n, Scalar(0)); }
std::vector<Scalar> ei(size_t n, size_t i) {
    auto v = zeros(n);
    v[i] = Scalar(1);
    return v;
}
BnElement rnd_elem(std::mt19937_64& rng, size_t n) {
    std::vector<Scalar> c(2 * n + 1);
    for (auto& v : c) v = corpus::rnd_rational(rng);
    return BnElement(n, c);
}
}  // namespace

TEST_CASE("gend on the n = 1 model") {
    GenMetric m(PseudoMetric::diagonal({Scalar(1)}));
    BnEndo G = m.gend();
    BnElement eminus = BnElement(1, {Scalar(1), Scalar(-1), Scalar(0)});
    BnElement eplus = BnElement(1, {Scalar(1), Scalar(1), Scalar(0)});
    BnElement one = BnElement(1, {Scalar(0), Scalar(0), Scalar(1)});
    CHECK(apply_endo(G, eminus) == -eminus);
    CHECK(apply_endo(G, eplus) == eplus);
    CHECK(apply_endo(G, one) == one);
}

TEST_CASE("gend is an involution and recovers the metric") {
    std::mt19937_64 rng(2718);
    for (size_t n : {2u, 3u, 4u})
        for (int t = 0; t < 5; ++t) {
            RMatrix gm = corpus::random_gl(rng, n);
            RMatrix g = gm.transpose() * gm;  // symmetric positive definite, dense
            GenMetric m = GenMetric(PseudoMetric(g));
            BnEndo G = m.gend();
            CHECK(G * G == RMatrix::identity(2 * n + 1));
            CHECK(m.induced_metric() == g);
            // orthogonality for the pairing
            RMatrix P = pairing_gram(n);
            CHECK(G.transpose() * P * G == P);
        }
}

TEST_CASE("assemble: n = 1 frozen matrix") {
    GenMetric m(PseudoMetric::diagonal({Scalar(1)}));
    ComponentsOdd c{RMatrix{{Scalar(1)}}, RMatrix(1, 1), RMatrix(1, 1), {Scalar(1)}, {Scalar(1)}};
    BnACS acs = assemble(m, c);
    RMatrix want{{Scalar(0), Scalar(0), Scalar(1)},
                 {Scalar(0), Scalar(0), Scalar(1)},
                 {Scalar(-1, 2), Scalar(-1, 2), Scalar(0)}};
    CHECK(acs.matrix() == want);
    // F^2(1) = -1
    BnElement one(1, {Scalar(0), Scalar(0), Scalar(1)});
    CHECK(apply_endo(acs.matrix(), apply_endo(acs.matrix(), one)) == -one);
    // u0 = (X- - g(X-)) normalized with positive leading coordinate
    CHECK(acs.u0() == BnElement(1, {Scalar(1), Scalar(-1), Scalar(0)}));
}

TEST_CASE("assemble rejects invalid components field-precisely") {
    GenMetric m(PseudoMetric::diagonal({Scalar(1), Scalar(1), Scalar(1)}));
    ComponentsOdd c{m.metric().matrix(), RMatrix(3, 3), RMatrix(3, 3), zeros(3), zeros(3)};
    // J+ = J- = 0 with X = 0 violates g(X,X) = 1
    CHECK_THROWS_WITH(assemble(m, c), Catch::Matchers::ContainsSubstring("g(X+,X+) = 1"));
}

TEST_CASE("even kernel section of the dim-2 family instance") {
    Instance inst = corpus::model_even_dim2();  // y = 3/5, eps = 1: c+ = 4/5
    auto& c = std::get<ComponentsEven>(inst.comps);
    REQUIRE(c.c_plus == Scalar(4, 5));
    // ker F = span{X+ + g(X+) + c+}
    BnElement u0 = inst.acs.u0();
    CHECK(u0.vector_part() == c.X_plus);
    CHECK(u0.covector_part() == inst.gm.metric().flat(c.X_plus));
    CHECK(u0.r() == c.c_plus);
    CHECK(scalar_product(u0, u0) == Scalar(1));
}

TEST_CASE("structure invariants of assembled endomorphisms") {
    std::mt19937_64 rng(160924);
    std::vector<Instance> corpus_list = {corpus::model_odd_dim3(0), corpus::model_odd_dim3(1),
                                         corpus::model_odd_dim3(2), corpus::model_even_dim2(),
                                         corpus::model_even_dim4()};
    for (int t = 0; t < 6; ++t) {
        const Instance& base = corpus_list[t % corpus_list.size()];
        Instance inst = corpus::transport(base, corpus::random_gl(rng, base.A.n()));
        size_t n = inst.A.n();
        // validate() covers skewness, endo-f, <u0,u0> and the rank-one kernel
        CHECK(inst.acs.validate().pass());
        BnEndo G = inst.gm.gend();
        CHECK(G * inst.acs.matrix() == inst.acs.matrix() * G);
        // F2 = G^end F is again a BnACS with the same kernel
        BnEndo F2 = G * inst.acs.matrix();
        BnACS acs2 = BnACS::from_matrix(n, F2);
        CHECK(acs2.validate().pass());
        CHECK(complexify(F2).kernel() == complexify(inst.acs.matrix()).kernel());
        // block identity: the (components-odd_2) matrix equals G^end F
        const RMatrix& g = inst.gm.metric().matrix();
        const RMatrix* Jp;
        const RMatrix* Jm;
        std::vector<Scalar> Xdot;
        if (auto odd = std::get_if<ComponentsOdd>(&inst.comps)) {
            Jp = &odd->J_plus;
            Jm = &odd->J_minus;
            Xdot = odd->X_plus;
        } else {
            auto& even = std::get<ComponentsEven>(inst.comps);
            Jp = &even.J_plus;
            Jm = &even.J_minus;
            Xdot = even.X_minus;
        }
        Scalar half(1, 2);
        RMatrix dif = half * (*Jp - *Jm);
        RMatrix sum = half * (*Jp + *Jm);
        BnEndo want(2 * n + 1, 2 * n + 1);
        RMatrix tm = dif;                          // (J+ - J-)/2
        RMatrix tmid = sum * inst.gm.metric().inverse();
        RMatrix ml = g * sum;
        RMatrix mm = -dif.transpose();
        auto gx = inst.gm.metric().flat(Xdot);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                want(i, j) = tm(i, j);
                want(i, n + j) = tmid(i, j);
                want(n + i, j) = ml(i, j);
                want(n + i, n + j) = mm(i, j);
            }
        for (size_t i = 0; i < n; ++i) {
            want(i, 2 * n) = Xdot[i];
            want(n + i, 2 * n) = gx[i];
            want(2 * n, i) = -half * gx[i];
            want(2 * n, n + i) = -half * Xdot[i];
        }
        CHECK(F2 == want);
    }
}

TEST_CASE("extract round trips") {
    std::mt19937_64 rng(87);
    std::vector<Instance> models = {corpus::model_odd_dim3(0), corpus::model_even_dim2(),
                                    corpus::model_even_dim4()};
    for (auto& base : models)
        for (int t = 0; t < 3; ++t) {
            Instance inst = corpus::transport(base, corpus::random_gl(rng, base.A.n()));
            Components c2 = extract(inst.gm, inst.acs);
            // canonical X- sign: compare against re-assembled matrices and the
            // original components up to the kernel-sign normalization
            BnACS acs2 = assemble(inst.gm, c2);
            CHECK(acs2.matrix() == inst.acs.matrix());
            if (auto odd = std::get_if<ComponentsOdd>(&inst.comps)) {
                auto& o2 = std::get<ComponentsOdd>(c2);
                CHECK(o2.g == odd->g);
                CHECK(o2.J_plus == odd->J_plus);
                CHECK(o2.J_minus == odd->J_minus);
                CHECK(o2.X_plus == odd->X_plus);
                bool same = o2.X_minus == odd->X_minus;
                bool neg = true;
                for (size_t i = 0; i < o2.X_minus.size(); ++i)
                    neg = neg && (o2.X_minus[i] == -odd->X_minus[i]);
                CHECK((same || neg));
            } else {
                auto& e1 = std::get<ComponentsEven>(inst.comps);
                auto& e2 = std::get<ComponentsEven>(c2);
                CHECK(e2.g == e1.g);
                CHECK(e2.J_plus == e1.J_plus);
                CHECK(e2.J_minus == e1.J_minus);
                CHECK(e2.X_minus == e1.X_minus);
                bool same = e2.X_plus == e1.X_plus && e2.c_plus == e1.c_plus;
                bool neg = e2.c_plus == -e1.c_plus;
                for (size_t i = 0; i < e2.X_plus.size() && neg; ++i)
                    neg = neg && (e2.X_plus[i] == -e1.X_plus[i]);
                CHECK((same || neg));
            }
        }
}

TEST_CASE("extract requires a commuting pair") {
    Instance inst = corpus::model_odd_dim3(0);
    // shift the endomorphism so it no longer commutes with G^end
    RMatrix bad = inst.acs.matrix();
    bad(0, 1) = bad(0, 1) + Scalar(1);
    BnACS fake(inst.A.n(), bad, inst.acs.u0());
    CHECK_THROWS_WITH(extract(inst.gm, fake), Catch::Matchers::ContainsSubstring("commute"));
}

TEST_CASE("eigenbundles: dual routes agree and examples hold") {
    SECTION("n = 1 example") {
        GenMetric m(PseudoMetric::diagonal({Scalar(1)}));
        ComponentsOdd c{RMatrix{{Scalar(1)}}, RMatrix(1, 1), RMatrix(1, 1), {Scalar(1)}, {Scalar(1)}};
        BnACS acs = assemble(m, c);
        Eigenbundles eb = eigenbundles(m, acs, c);
        CHECK(eb.L1.rank() == 1);
        CHECK(eb.L1_minus.rank() == 0);
        // L1 = span{v1 + v1* + i}
        CHECK(eb.L1.contains({CScalar(1), CScalar(1), CScalar::i()}));
    }
    SECTION("dim-2 family instance: L1+ contains V- + g(V-) + i") {
        Instance inst = corpus::model_even_dim2();
        auto& c = std::get<ComponentsEven>(inst.comps);
        Eigenbundles eb = eigenbundles(inst.gm, inst.acs, inst.comps);
        CHECK(eb.L1.rank() == 2);
        Scalar denom = Scalar(1) - c.c_plus * c.c_plus;  // 9/25
        std::vector<CScalar> V(2);
        for (size_t i = 0; i < 2; ++i)
            V[i] = (CScalar(c.X_minus[i]) - CScalar::i() * CScalar(c.c_plus) * CScalar(c.X_plus[i])) /
                   CScalar(denom);
        auto flat = inst.gm.metric().flat(V);
        std::vector<CScalar> row(5, CScalar(Scalar(0)));
        for (size_t i = 0; i < 2; ++i) {
            row[i] = V[i];
            row[2 + i] = flat[i];
        }
        row[4] = CScalar::i();
        CHECK(eb.L1_plus.contains(row));
        CHECK(eb.L1_plus.rank() == 1);
        CHECK(eb.L1_minus.rank() == 1);
    }
    SECTION("rank L1 = n and route agreement on transported corpus") {
        std::mt19937_64 rng(424242);
        std::vector<Instance> models = {corpus::model_odd_dim3(0), corpus::model_odd_dim3(2),
                                        corpus::model_even_dim2(), corpus::model_even_dim4()};
        for (auto& base : models)
            for (int t = 0; t < 3; ++t) {
                Instance inst = corpus::transport(base, corpus::random_gl(rng, base.A.n()));
                // eigenbundles() throws if the closed forms and the direct
                // eigenspace intersection ever disagree
                Eigenbundles eb = eigenbundles(inst.gm, inst.acs, inst.comps);
                CHECK(eb.L1.rank() == inst.A.n());
                CHECK(sum(eb.L1_plus, eb.L1_minus) == eb.L1);
            }
    }
    SECTION("even case with c+^2 = 1 is rejected") {
        GenMetric m(PseudoMetric::diagonal({Scalar(1), Scalar(1)}));
        RMatrix J(2, 2);
        J(0, 1) = Scalar(-1);
        J(1, 0) = Scalar(1);
        ComponentsEven c{m.metric().matrix(), J, J, zeros(2), zeros(2), Scalar(1)};
        BnACS acs = assemble(m, c);
        CHECK_THROWS_WITH(eigenbundles(m, acs, Components(c)),
                          Catch::Matchers::ContainsSubstring("c+^2 = 1"));
    }
}

TEST_CASE("prop-G identities") {
    std::mt19937_64 rng(5050);
    std::vector<Instance> models = {corpus::model_odd_dim3(0), corpus::model_even_dim4()};
    for (auto& inst : models) {
        size_t n = inst.A.n();
        BnEndo G = inst.gm.gend();
        const BnEndo& F = inst.acs.matrix();
        const BnElement& u0 = inst.acs.u0();
        auto Gb = [&](const BnElement& u, const BnElement& v) {
            return scalar_product(apply_endo(G, u), v);
        };
        for (int t = 0; t < 20; ++t) {
            BnElement u = rnd_elem(rng, n), v = rnd_elem(rng, n);
            BnElement Fu = apply_endo(F, u), Fv = apply_endo(F, v);
            CHECK(Gb(Fu, Fv) == Gb(u, v) - scalar_product(u, u0) * scalar_product(v, u0));
            CHECK(Gb(Fu, v) == -Gb(u, Fv));
        }
        // G^end(u0) = (-1)^n u0
        Scalar sign((n % 2 == 0) ? 1 : -1);
        CHECK(apply_endo(G, u0) == sign * u0);
    }
}

TEST_CASE("admissibility check") {
    Instance inst = corpus::model_odd_dim3(0);
    BnEndo F2m = inst.gm.gend() * inst.acs.matrix();
    BnACS F2 = BnACS::from_matrix(inst.A.n(), F2m);
    Report ok = admissibility_check(inst.gm, inst.acs, F2);
    CHECK(ok.pass());
    // F2 = F1: the subspace {F1 u = -F2 u} = ker F1 has rank 1 < n
    Report bad = admissibility_check(inst.gm, inst.acs, inst.acs);
    CHECK_FALSE(bad.pass());
}
