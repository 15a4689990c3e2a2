#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bnck/integrability.hpp"
#include "support/corpus.hpp"

using namespace bnck;

namespace {
std::vector<Scalar> ei(size_t n, size_t i) {
    std::vector<Scalar> v(n, Scalar(0));
    v[i] = Scalar(1);
    return v;
}
}  // namespace

TEST_CASE("bundle_closed") {
    Instance iso2 = corpus::model_odd_dim3(0);
    SECTION("full bundle is closed") {
        CMatrix full = CMatrix::identity(7);
        CHECK(bundle_closed(iso2.A, Subspace(7, full)).pass());
    }
    SECTION("L1 of the untwisted dim-2 family instance is closed") {
        Instance inst = corpus::model_even_dim2();
        Subspace L1 = eigenspace(complexify(inst.acs.matrix()), CScalar::i());
        CHECK(bundle_closed(inst.A, L1).pass());
    }
    SECTION("graph spans over so(3)") {
        // [u,u] = 0 for constant sections, so a single graph section spans a
        // closed rank-1 bundle; two of them already fail with a witness pair.
        LieAlgebra so3 = corpus::so3_like(Scalar(1), Scalar(1), Scalar(1), 1, 1, 1);
        BnAlgebroid A = BnAlgebroid::untwisted(so3);
        PseudoMetric g = PseudoMetric::diagonal({Scalar(1), Scalar(1), Scalar(1)});
        auto graph = [&](size_t i) {
            std::vector<CScalar> row(7, CScalar(Scalar(0)));
            row[i] = CScalar(1);
            row[3 + i] = CScalar(1);
            return row;
        };
        CMatrix one(0, 7);
        one.append_row(graph(0));
        CHECK(bundle_closed(A, Subspace(7, one)).pass());
        CMatrix two(0, 7);
        two.append_row(graph(0));
        two.append_row(graph(1));
        Subspace S(7, two);
        Report rep = bundle_closed(A, S);
        CHECK_FALSE(rep.pass());
        // the witness is replayable: re-evaluating the cited basis pair
        // reproduces the failure
        std::string w = rep.first_failure()->witness;
        REQUIRE(w.find("pair") != std::string::npos);
        size_t i = w.find('(');
        size_t comma = w.find(',', i);
        size_t a = std::stoul(w.substr(i + 1, comma - i - 1)) - 1;
        size_t b = std::stoul(w.substr(comma + 1)) - 1;
        CBnElement u(3, S.basis_vector(a)), v(3, S.basis_vector(b));
        CHECK_FALSE(S.contains(A.dorfman(u, v).coords()));
    }
}

TEST_CASE("twisted closure pins the H-term sign of the bracket") {
    // On so(3) + R with the bi-invariant metric, the graph bundle over
    // D = span{e1 - i e2, e3 - i e4} is closed for the twist H = e1*^e2*^e3*
    // (hand computation: the 1-form parts of the brackets match the flats of
    // the vector parts exactly), and fails for H = -e1*^e2*^e3*. This ties
    // the bracket's H-term to the Koszul-side conventions.
    LieAlgebra L(4);
    L.set_bracket(0, 1, 2, Scalar(1));
    L.set_bracket(1, 2, 0, Scalar(1));
    L.set_bracket(2, 0, 1, Scalar(1));
    auto bundle = [&](const Scalar& h123) {
        KForm H(4, 3);
        H.set_term({0, 1, 2}, h123);
        BnAlgebroid A(L, H, KForm(4, 2));
        CMatrix span(0, 9);
        auto graph = [&](size_t a, size_t b) {
            std::vector<CScalar> row(9, CScalar(Scalar(0)));
            row[a] = CScalar(1);
            row[4 + a] = CScalar(1);
            row[b] = -CScalar::i();
            row[4 + b] = -CScalar::i();
            return row;
        };
        span.append_row(graph(0, 1));
        span.append_row(graph(2, 3));
        return bundle_closed(A, Subspace(9, span));
    };
    CHECK(bundle(Scalar(1)).pass());
    CHECK_FALSE(bundle(Scalar(-1)).pass());
}

TEST_CASE("catalog models pass the direct and component checkers") {
    std::vector<Instance> models = {corpus::model_odd_dim3(0), corpus::model_odd_dim3(1),
                                    corpus::model_odd_dim3(2), corpus::model_even_dim2(),
                                    corpus::model_even_dim4()};
    for (auto& inst : models) {
        Report both = check_both(inst);
        INFO(both.summary());
        CHECK(both.pass());
    }
}

TEST_CASE("check_direct asserts the kernel-section consequences when passing") {
    Instance inst = corpus::model_odd_dim3(0);
    Report rep = check_direct(inst.A, inst.gm, inst.acs);
    REQUIRE(rep.pass());
    bool saw_f = false, saw_g = false;
    for (auto& c : rep.checks) {
        if (c.label.find("L_{u0} F = 0") != std::string::npos) saw_f = true;
        if (c.label.find("L_{u0} G^end = 0") != std::string::npos) saw_g = true;
    }
    CHECK(saw_f);
    CHECK(saw_g);
}

TEST_CASE("criterion route agrees with the definition route (L1 and L2 closed)") {
    std::mt19937_64 rng(60915);
    std::vector<Instance> corpus_list = {corpus::model_odd_dim3(0), corpus::model_even_dim2(),
                                         corpus::model_even_dim4()};
    for (auto& c : corpus::corruptions_odd_dim3()) corpus_list.push_back(c.inst);
    for (auto& c : corpus::corruptions_even()) corpus_list.push_back(c.inst);
    for (auto& inst : corpus_list) {
        Report crit = check_direct(inst.A, inst.gm, inst.acs);
        Report defn = check_direct_definition(inst.A, inst.gm, inst.acs);
        CHECK(crit.pass() == defn.pass());
    }
    (void)rng;
}

TEST_CASE("oracle equivalence on corruptions") {
    for (auto& c : corpus::corruptions_odd_dim3()) {
        Report direct = check_direct(c.inst.A, c.inst.gm, c.inst.acs);
        Report comp = check_components(c.inst);
        INFO(c.label);
        CHECK_FALSE(direct.pass());
        CHECK(direct.pass() == comp.pass());
    }
    for (auto& c : corpus::corruptions_even()) {
        Report direct = check_direct(c.inst.A, c.inst.gm, c.inst.acs);
        Report comp = check_components(c.inst);
        INFO(c.label);
        CHECK_FALSE(direct.pass());
        CHECK(direct.pass() == comp.pass());
    }
}

TEST_CASE("reduced tests agree with the full ones (check lines stay green)") {
    auto assert_agreement_line = [](const Report& rep, const std::string& needle) {
        for (auto& c : rep.checks)
            if (c.label.find(needle) != std::string::npos) {
                INFO(c.label << " " << c.witness);
                CHECK(c.ok);
                return;
            }
        FAIL("missing agreement line");
    };
    for (auto& c : corpus::corruptions_odd_dim3()) {
        Report comp = check_components(c.inst);
        assert_agreement_line(comp, "reduced test agrees");
    }
    Report ok3 = check_components(corpus::model_odd_dim3(0));
    assert_agreement_line(ok3, "reduced test agrees");
    Report ok2 = check_components(corpus::model_even_dim2());
    assert_agreement_line(ok2, "reduced test agrees");
    Report ok4 = check_components(corpus::model_even_dim4());
    assert_agreement_line(ok4, "reduced test agrees");
    for (auto& c : corpus::corruptions_even()) {
        Report comp = check_components(c.inst);
        assert_agreement_line(comp, "reduced test agrees");
    }
}

TEST_CASE("passing odd structures: Killing, commuting and J-preserving X-") {
    for (int variant : {0, 1, 2}) {
        Instance inst = corpus::model_odd_dim3(variant);
        REQUIRE(check_components(inst).pass());
        auto& c = std::get<ComponentsOdd>(inst.comps);
        const LieAlgebra& L = inst.A.algebra();
        PseudoMetric g(c.g);
        Connection conn = levi_civita(L, g);
        // X- Killing
        for (size_t i = 0; i < 3; ++i)
            for (size_t j = 0; j < 3; ++j) {
                Scalar v = g.inner(conn.derive(i, c.X_minus), ei(3, j)) +
                           g.inner(conn.derive(j, c.X_minus), ei(3, i));
                CHECK(v.is_zero());
            }
        // [X+, X-] = 0
        for (auto& v : L.bracket(c.X_plus, c.X_minus)) CHECK(v.is_zero());
        // L_{X-} J+- = 0: [X-, J y] - J [X-, y] = 0 on the basis
        for (const RMatrix* J : {&c.J_plus, &c.J_minus})
            for (size_t i = 0; i < 3; ++i) {
                auto lhs = L.bracket(c.X_minus, J->apply(ei(3, i)));
                auto rhs = J->apply(L.bracket(c.X_minus, ei(3, i)));
                for (size_t k = 0; k < 3; ++k) CHECK(lhs[k] == rhs[k]);
            }
    }
}

TEST_CASE("rescaling preserves the verdict") {
    SECTION("odd: lambda in {1, -1, 2, -2, 3/2}") {
        for (int variant : {0, 2}) {
            Instance inst = corpus::model_odd_dim3(variant);
            for (auto& l : {Scalar(1), Scalar(-1), Scalar(2), Scalar(-2), Scalar(3, 2)}) {
                Instance scaled = rescale_odd(inst, l);
                CHECK(check_both(scaled).pass());
                if (l == Scalar(1)) {
                    CHECK(scaled.acs.matrix() == inst.acs.matrix());
                    CHECK(scaled.gm.metric().matrix() == inst.gm.metric().matrix());
                }
            }
        }
        CHECK_THROWS_AS(rescale_odd(corpus::model_odd_dim3(0), Scalar(0)), std::invalid_argument);
    }
    SECTION("even to-unit: c+ in {4/5, 3/5, 12/13}") {
        auto cat = catalog();
        auto& e2 = catalog_entry(cat, "dim2-abelian");
        for (auto& y : {Scalar(3, 5), Scalar(4, 5), Scalar(5, 13)}) {
            ParamMap p{{"y", y}, {"eps", Scalar(1)}, {"eps0", Scalar(1)}, {"eps_plus", Scalar(1)}};
            Instance inst = e2.generate(p);
            auto& orig = std::get<ComponentsEven>(inst.comps);
            CHECK(inst.gm.metric().inner(orig.X_plus, orig.X_plus) ==
                  Scalar(1) - orig.c_plus * orig.c_plus);
            Instance unit = rescale_even_to_unit(inst);
            auto& c = std::get<ComponentsEven>(unit.comps);
            CHECK(c.c_plus.is_zero());
            CHECK(unit.gm.metric().inner(c.X_plus, c.X_plus) == Scalar(1));
            CHECK(check_both(unit).pass());
        }
        auto& e4 = catalog_entry(cat, "dim4-adapted");
        Instance inst4 = e4.generate(e4.samples.at(0));  // c+ = 4/5
        Instance unit4 = rescale_even_to_unit(inst4);
        auto& c4 = std::get<ComponentsEven>(unit4.comps);
        CHECK(c4.c_plus.is_zero());
        // |1 - c+^2| = 9/25: X+- scale by 5/3
        auto& orig = std::get<ComponentsEven>(inst4.comps);
        for (size_t i = 0; i < 4; ++i) CHECK(c4.X_plus[i] == Scalar(5, 3) * orig.X_plus[i]);
        CHECK(check_both(unit4).pass());
        // c+ = 0 and c+^2 = 1 are rejected
        CHECK_THROWS_AS(rescale_even_to_unit(unit4), std::invalid_argument);
    }
}

TEST_CASE("classical reduction (X+ = X- = 0, c+^2 = 1)") {
    LieAlgebra ab(2);
    PseudoMetric g = PseudoMetric::diagonal({Scalar(1), Scalar(1)});
    RMatrix rot(2, 2);
    rot(0, 1) = Scalar(-1);
    rot(1, 0) = Scalar(1);
    std::vector<Scalar> zero = {Scalar(0), Scalar(0)};
    SECTION("flat Kaehler passes and agrees with the direct route") {
        ComponentsEven c{g.matrix(), rot, rot, zero, zero, Scalar(1)};
        BnAlgebroid A = BnAlgebroid::untwisted(ab);
        GenMetric gm(g);
        Report rep = classical_reduction_check(A, gm, c);
        CHECK(rep.pass());
        Instance inst = build_instance(A, g, c);
        CHECK(check_direct(inst.A, inst.gm, inst.acs).pass());
    }
    SECTION("F != 0 is forbidden") {
        KForm F(2, 2);
        F.set_term({0, 1}, Scalar(1));
        BnAlgebroid A(ab, KForm(2, 3), F);
        ComponentsEven c{g.matrix(), rot, rot, zero, zero, Scalar(1)};
        GenMetric gm(g);
        Report rep = classical_reduction_check(A, gm, c);
        CHECK_FALSE(rep.pass());
        Instance inst = build_instance(A, g, c);
        CHECK_FALSE(check_direct(inst.A, inst.gm, inst.acs).pass());
    }
    SECTION("J+ != +-J- still passes for constant structures") {
        ComponentsEven c{g.matrix(), -rot, rot, zero, zero, Scalar(1)};
        BnAlgebroid A = BnAlgebroid::untwisted(ab);
        GenMetric gm(g);
        CHECK(classical_reduction_check(A, gm, c).pass());
        Instance inst = build_instance(A, g, c);
        CHECK(check_direct(inst.A, inst.gm, inst.acs).pass());
    }
    SECTION("nonzero X+- is rejected by the reduction entry point") {
        ComponentsEven c{g.matrix(), rot, rot, {Scalar(1), Scalar(0)}, zero, Scalar(1)};
        BnAlgebroid A = BnAlgebroid::untwisted(ab);
        GenMetric gm(g);
        CHECK_THROWS_AS(classical_reduction_check(A, gm, c), std::invalid_argument);
    }
}

TEST_CASE("check_even rejects c+^2 = 1 naming the non-null hypothesis") {
    LieAlgebra ab(2);
    PseudoMetric g = PseudoMetric::diagonal({Scalar(1), Scalar(1)});
    RMatrix rot(2, 2);
    rot(0, 1) = Scalar(-1);
    rot(1, 0) = Scalar(1);
    ComponentsEven c{g.matrix(), rot, rot, {Scalar(0), Scalar(0)}, {Scalar(0), Scalar(0)}, Scalar(1)};
    GenMetric gm(g);
    CHECK_THROWS_WITH(check_even(BnAlgebroid::untwisted(ab), gm, c),
                      Catch::Matchers::ContainsSubstring("non-null"));
}

TEST_CASE("exchange equivalence line on even instances") {
    for (auto& inst : {corpus::model_even_dim2(), corpus::model_even_dim4()}) {
        Report rep = check_components(inst);
        bool found = false;
        for (auto& c : rep.checks)
            if (c.label.find("exchange relation") != std::string::npos) {
                found = true;
                CHECK(c.ok);
            }
        CHECK(found);
    }
}

TEST_CASE("oracle equivalence on transported random structures") {
    std::mt19937_64 rng(77001);
    std::vector<Instance> models = {corpus::model_odd_dim3(0), corpus::model_odd_dim3(1),
                                    corpus::model_even_dim2(), corpus::model_even_dim4()};
    for (auto& base : models)
        for (int t = 0; t < 4; ++t) {
            Instance inst = corpus::transport(base, corpus::random_gl(rng, base.A.n()));
            Report direct = check_direct(inst.A, inst.gm, inst.acs);
            Report comp = check_components(inst);
            CHECK(direct.pass());
            CHECK(comp.pass());
        }
}
