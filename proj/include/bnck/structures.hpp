#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bnck/courant.hpp"
#include "bnck/forms.hpp"
#include "bnck/liealg.hpp"
#include "bnck/linalg.hpp"
#include "bnck/report.hpp"
#include "bnck/scalar.hpp"

namespace bnck {

/// Generalized metric in standard form (b = 0, A = 0): E- = {X - i_X g},
/// E+ = {X + i_X g} + R.
class GenMetric {
public:
    explicit GenMetric(PseudoMetric g) : g_(std::move(g)) {}

    size_t n() const { return g_.dim(); }
    const PseudoMetric& metric() const { return g_; }

    /// s: TM -> E-, X -> X - i_X g.
    BnElement s_minus(const std::vector<Scalar>& x) const {
        auto flat = g_.flat(x);
        std::vector<Scalar> neg(flat.size());
        for (size_t i = 0; i < flat.size(); ++i) neg[i] = -flat[i];
        return BnElement::from_parts(x, neg, Scalar(0));
    }
    BnElement s_plus(const std::vector<Scalar>& x) const {
        return BnElement::from_parts(x, g_.flat(x), Scalar(0));
    }

    /// Row-span matrices of E- (rank n) and E+ (rank n+1).
    RMatrix eminus_basis() const {
        size_t nn = n();
        RMatrix m(nn, 2 * nn + 1);
        for (size_t i = 0; i < nn; ++i) {
            auto v = s_minus(basis(i));
            for (size_t j = 0; j < 2 * nn + 1; ++j) m(i, j) = v.coords()[j];
        }
        return m;
    }
    RMatrix eplus_basis() const {
        size_t nn = n();
        RMatrix m(nn + 1, 2 * nn + 1);
        for (size_t i = 0; i < nn; ++i) {
            auto v = s_plus(basis(i));
            for (size_t j = 0; j < 2 * nn + 1; ++j) m(i, j) = v.coords()[j];
        }
        m(nn, 2 * nn) = Scalar(1);
        return m;
    }

    /// G^end = +Id on E+, -Id on E-; in coordinates [[0,g^-1,0],[g,0,0],[0,0,1]].
    BnEndo gend() const {
        size_t nn = n();
        BnEndo m(2 * nn + 1, 2 * nn + 1);
        for (size_t i = 0; i < nn; ++i)
            for (size_t j = 0; j < nn; ++j) {
                m(i, nn + j) = g_.inverse()(i, j);
                m(nn + i, j) = g_.matrix()(i, j);
            }
        m(2 * nn, 2 * nn) = Scalar(1);
        return m;
    }

    /// Bilinear form G(u,v) = <G^end u, v>.
    Scalar gbilinear(const BnElement& u, const BnElement& v) const {
        return scalar_product(apply_endo(gend(), u), v);
    }

    /// Recovers the induced metric via g(X,Y) = -<s(X), s(Y)>.
    RMatrix induced_metric() const {
        size_t nn = n();
        RMatrix r(nn, nn);
        for (size_t i = 0; i < nn; ++i)
            for (size_t j = 0; j < nn; ++j) r(i, j) = -scalar_product(s_minus(basis(i)), s_minus(basis(j)));
        return r;
    }

private:
    std::vector<Scalar> basis(size_t i) const {
        std::vector<Scalar> v(n(), Scalar(0));
        v[i] = Scalar(1);
        return v;
    }
    PseudoMetric g_;
};

/// Classical tensors of the odd-parity structures: J+- are g-skew with
/// J+-X+- = 0, complex on the orthogonal of the unit fields X+-.
struct ComponentsOdd {
    RMatrix g;
    RMatrix J_plus, J_minus;
    std::vector<Scalar> X_plus, X_minus;

    Report validate() const;
};

/// Even-parity tensors: J- is a g-skew almost complex structure, J+ rotates
/// the orthogonal pair (X+, X-) by c+ and is complex transverse to it.
struct ComponentsEven {
    RMatrix g;
    RMatrix J_plus, J_minus;
    std::vector<Scalar> X_plus, X_minus;
    Scalar c_plus;

    Report validate() const;
};

using Components = std::variant<ComponentsOdd, ComponentsEven>;

namespace detail {
inline RMatrix rank_one_update(const PseudoMetric& g, const std::vector<Scalar>& a,
                               const std::vector<Scalar>& b) {
    // x -> g(x, a) b as a matrix
    size_t n = g.dim();
    RMatrix m(n, n);
    auto ga = g.flat(a);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) m(i, j) = ga[j] * b[i];
    return m;
}
inline std::string vec_str(const std::vector<Scalar>& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        s += v[i].str();
        if (i + 1 < v.size()) s += ",";
    }
    return s + ")";
}
}  // namespace detail

inline Report ComponentsOdd::validate() const {
    Report rep;
    size_t n = g.rows();
    std::optional<PseudoMetric> pm;
    try {
        pm.emplace(g);
    } catch (const std::exception& e) {
        rep.add("metric symmetric nondegenerate", false, e.what());
        return rep;
    }
    if (n % 2 == 0) rep.add("odd parity dimension", false, "dim " + std::to_string(n) + " is even");
    auto check_side = [&](const RMatrix& J, const std::vector<Scalar>& X, const std::string& tag) {
        rep.add("J" + tag + " g-skew", pm->is_skew(J));
        bool jx = true;
        auto v = J.apply(X);
        for (auto& c : v) jx = jx && c.is_zero();
        rep.add("J" + tag + " X" + tag + " = 0", jx);
        rep.add("g(X" + tag + ",X" + tag + ") = 1", pm->inner(X, X) == Scalar(1),
                pm->inner(X, X).str());
        RMatrix want = -RMatrix::identity(n) + detail::rank_one_update(*pm, X, X);
        rep.add("J" + tag + "^2 = -Id + g(.,X" + tag + ")X" + tag, J * J == want);
    };
    check_side(J_plus, X_plus, "+");
    check_side(J_minus, X_minus, "-");
    if (rep.pass())
        rep.add("g(X+,X-) recorded (unconstrained in the odd case)", true,
                pm->inner(X_plus, X_minus).str());
    return rep;
}

inline Report ComponentsEven::validate() const {
    Report rep;
    size_t n = g.rows();
    std::optional<PseudoMetric> pm;
    try {
        pm.emplace(g);
    } catch (const std::exception& e) {
        rep.add("metric symmetric nondegenerate", false, e.what());
        return rep;
    }
    if (n % 2 == 1) rep.add("even parity dimension", false, "dim " + std::to_string(n) + " is odd");
    rep.add("J- g-skew", pm->is_skew(J_minus));
    rep.add("J- almost complex", J_minus * J_minus == -RMatrix::identity(n));
    rep.add("J+ g-skew", pm->is_skew(J_plus));
    Scalar want_norm = Scalar(1) - c_plus * c_plus;
    rep.add("g(X+,X+) = 1 - c+^2", pm->inner(X_plus, X_plus) == want_norm, pm->inner(X_plus, X_plus).str());
    rep.add("g(X-,X-) = 1 - c+^2", pm->inner(X_minus, X_minus) == want_norm,
            pm->inner(X_minus, X_minus).str());
    rep.add("g(X+,X-) = 0", pm->inner(X_plus, X_minus).is_zero(), pm->inner(X_plus, X_minus).str());
    auto jxp = J_plus.apply(X_plus);
    bool ok = true;
    for (size_t i = 0; i < n; ++i) ok = ok && (jxp[i] == -c_plus * X_minus[i]);
    rep.add("J+ X+ = -c+ X-", ok);
    auto jxm = J_plus.apply(X_minus);
    ok = true;
    for (size_t i = 0; i < n; ++i) ok = ok && (jxm[i] == c_plus * X_plus[i]);
    rep.add("J+ X- = c+ X+", ok);
    RMatrix want = -RMatrix::identity(n) + detail::rank_one_update(*pm, X_plus, X_plus) +
                   detail::rank_one_update(*pm, X_minus, X_minus);
    rep.add("J+^2 = -Id + g(.,X+)X+ + g(.,X-)X-", J_plus * J_plus == want);
    return rep;
}

/// Bn-generalized almost complex structure: pairing-skew endomorphism with
/// rank-one kernel and F^2 = -Id + (-1)^n <.,u0> u0, <u0,u0> = (-1)^n.
class BnACS {
public:
    BnACS(size_t n, BnEndo endo, BnElement u0) : n_(n), endo_(std::move(endo)), u0_(std::move(u0)) {}

    /// Builds from a raw matrix, validating all structure invariants and
    /// normalizing the kernel section (sign: first nonzero coordinate > 0).
    static BnACS from_matrix(size_t n, const BnEndo& endo);

    size_t n() const { return n_; }
    bool parity_odd() const { return n_ % 2 == 1; }
    const BnEndo& matrix() const { return endo_; }
    const BnElement& u0() const { return u0_; }

    Report validate() const {
        Report rep;
        size_t r = 2 * n_ + 1;
        rep.add("F pairing-skew", pairing_skew(n_, endo_));
        RMatrix sq = endo_ * endo_;
        RMatrix want = -RMatrix::identity(r);
        Scalar sign((n_ % 2 == 0) ? 1 : -1);
        RMatrix G = pairing_gram(n_);
        auto u0c = u0_.coords();
        std::vector<Scalar> pair_u0(r, Scalar(0));  // a -> <e_a, u0>
        for (size_t a = 0; a < r; ++a)
            for (size_t b = 0; b < r; ++b) pair_u0[a] += G(a, b) * u0c[b];
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < r; ++j) want(i, j) += sign * pair_u0[j] * u0c[i];
        rep.add("F^2 = -Id + (-1)^n <.,u0> u0", sq == want);
        rep.add("<u0,u0> = (-1)^n", scalar_product(u0_, u0_) == sign, scalar_product(u0_, u0_).str());
        CMatrix ker = complexify(endo_).kernel();
        rep.add("rank-one kernel", ker.rows() == 1, "rank " + std::to_string(ker.rows()));
        return rep;
    }

private:
    size_t n_;
    BnEndo endo_;
    BnElement u0_;
};

/// Normalizes a spanning kernel vector to <u0,u0> = (-1)^n with positive
/// leading coordinate. Exact mode requires the norm ratio to be a perfect
/// square (always the case for structures assembled from rational tensors).
inline BnElement normalize_kernel_section(size_t n, const RMatrix& endo) {
    CMatrix ker = complexify(endo).kernel();
    if (ker.rows() != 1) throw std::invalid_argument("BnACS: kernel rank is not one");
    std::vector<Scalar> w(2 * n + 1);
    for (size_t j = 0; j < 2 * n + 1; ++j) {
        if (!ker(0, j).im.is_zero()) throw std::invalid_argument("BnACS: kernel is not real");
        w[j] = ker(0, j).re;
    }
    BnElement wv(n, w);
    Scalar norm = scalar_product(wv, wv);
    Scalar sign((n % 2 == 0) ? 1 : -1);
    if ((sign * norm).sign() <= 0) throw std::invalid_argument("BnACS: kernel section has wrong norm sign");
    auto root = (sign * norm).sqrt();
    if (!root) {
        if (norm.exact()) throw std::invalid_argument("BnACS: kernel normalization needs sqrt(" +
                                                      (sign * norm).str() + "); use numeric mode");
        root = (sign * norm).as_numeric().sqrt();
    }
    Scalar t = Scalar(1) / *root;
    BnElement u0 = t * wv;
    for (auto& c : u0.coords()) {
        if (c.is_zero()) continue;
        if (c.sign() < 0) u0 = -u0;
        break;
    }
    return u0;
}

inline BnACS BnACS::from_matrix(size_t n, const BnEndo& endo) {
    BnElement u0 = normalize_kernel_section(n, endo);
    BnACS acs(n, endo, u0);
    Report rep = acs.validate();
    if (!rep.pass()) throw std::invalid_argument("BnACS: invariant failed: " + rep.summary());
    return acs;
}

/// Assembles F from components via the standard-form block matrix
///   [ (J+ + J-)/2        (J+ - J-) g^-1 / 2    X.      ]
///   [ g (J+ - J-) / 2    -(J+ + J-)^* / 2      i_X. g  ]
///   [ -i_X. g / 2        -X. / 2               0       ]
/// where X. is X+ for odd parity and X- for even parity.
inline BnACS assemble(const GenMetric& m, const Components& comps) {
    size_t n = m.n();
    const RMatrix& g = m.metric().matrix();
    const RMatrix& ginv = m.metric().inverse();

    const RMatrix* Jp;
    const RMatrix* Jm;
    std::vector<Scalar> Xdot;
    Report valid;
    if (auto odd = std::get_if<ComponentsOdd>(&comps)) {
        if (odd->g != g) throw std::invalid_argument("assemble: component metric differs from GenMetric");
        valid = odd->validate();
        Jp = &odd->J_plus;
        Jm = &odd->J_minus;
        Xdot = odd->X_plus;
    } else {
        auto& even = std::get<ComponentsEven>(comps);
        if (even.g != g) throw std::invalid_argument("assemble: component metric differs from GenMetric");
        valid = even.validate();
        Jp = &even.J_plus;
        Jm = &even.J_minus;
        Xdot = even.X_minus;
    }
    if (!valid.pass())
        throw std::invalid_argument("assemble: component invariant failed: " + valid.summary());

    Scalar half(1, 2);
    RMatrix sumJ = half * (*Jp + *Jm);
    RMatrix difJ = half * (*Jp - *Jm);
    BnEndo F(2 * n + 1, 2 * n + 1);
    RMatrix top_mid = difJ * ginv;
    RMatrix mid_left = g * difJ;                  // (1/2) g (J+ - J-)
    RMatrix mid_mid = -sumJ.transpose();          // -(1/2)(J+ + J-)^*
    auto gx = m.metric().flat(Xdot);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            F(i, j) = sumJ(i, j);
            F(i, n + j) = top_mid(i, j);
            F(n + i, j) = mid_left(i, j);
            F(n + i, n + j) = mid_mid(i, j);
        }
    for (size_t i = 0; i < n; ++i) {
        F(i, 2 * n) = Xdot[i];
        F(n + i, 2 * n) = gx[i];
        F(2 * n, i) = -half * gx[i];
        F(2 * n, n + i) = -half * Xdot[i];
    }
    BnACS acs = BnACS::from_matrix(n, F);
    // kernel postcondition pinning the X. resolution: ker F = span{u-} with
    // u- = X- - g(X-) in the odd case, span{u+} with u+ = X+ + g(X+) + c+
    // in the even case
    BnElement expected(n);
    if (auto odd = std::get_if<ComponentsOdd>(&comps)) {
        auto negflat = m.metric().flat(odd->X_minus);
        for (auto& v : negflat) v = -v;
        expected = BnElement::from_parts(odd->X_minus, negflat, Scalar(0));
    } else {
        auto& even = std::get<ComponentsEven>(comps);
        expected = BnElement::from_parts(even.X_plus, m.metric().flat(even.X_plus), even.c_plus);
    }
    if (!(acs.u0() == expected) && !(acs.u0() == -expected))
        throw std::logic_error("assemble: kernel section differs from the expected u0");
    return acs;
}

/// Reads the components back from a commuting pair (exact inverse of
/// assemble on canonical component sets). J- = A - Bg and J+ = A + Bg from
/// the TM blocks; the kernel section supplies X- (odd) or (X+, c+) (even).
inline Components extract(const GenMetric& m, const BnACS& F) {
    size_t n = m.n();
    BnEndo gend = m.gend();
    if (gend * F.matrix() != F.matrix() * gend)
        throw std::invalid_argument("extract: F does not commute with G^end");
    const RMatrix& g = m.metric().matrix();
    RMatrix A(n, n), B(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            A(i, j) = F.matrix()(i, j);
            B(i, j) = F.matrix()(i, n + j);
        }
    RMatrix Bg = B * g;
    RMatrix Jm = A - Bg;
    RMatrix Jp = A + Bg;
    const BnElement& u0 = F.u0();
    if (F.parity_odd()) {
        ComponentsOdd c{g, Jp, Jm, {}, {}};
        for (size_t i = 0; i < n; ++i) c.X_plus.push_back(F.matrix()(i, 2 * n));
        c.X_minus = u0.vector_part();
        return c;
    }
    ComponentsEven c{g, Jp, Jm, {}, {}, u0.r()};
    c.X_plus = u0.vector_part();
    for (size_t i = 0; i < n; ++i) c.X_minus.push_back(F.matrix()(i, 2 * n));
    return c;
}

struct Eigenbundles {
    Subspace L1, L1_plus, L1_minus;
};

/// i-eigenspace of J acting on the complexified algebra.
inline Subspace holomorphic_distribution(const RMatrix& J) {
    return eigenspace(complexify(J), CScalar::i());
}

/// L1 = i-eigenbundle of F; L1+- both by intersecting with (E+-)_C and by
/// the closed forms (graphs of g over the holomorphic distributions of J+-,
/// plus the distinguished section in L1+); the two routes must agree.
inline Eigenbundles eigenbundles(const GenMetric& m, const BnACS& F, const Components& comps) {
    size_t n = m.n();
    size_t r = 2 * n + 1;
    Subspace L1 = eigenspace(complexify(F.matrix()), CScalar::i());
    Subspace Ep(r, complexify(m.eplus_basis()));
    Subspace Em(r, complexify(m.eminus_basis()));
    Subspace L1p_direct = intersect(L1, Ep);
    Subspace L1m_direct = intersect(L1, Em);

    auto graph_row = [&](const std::vector<CScalar>& x, const Scalar& sign_plus,
                         const CScalar& rpart) {
        std::vector<CScalar> row(r, CScalar(Scalar(0)));
        auto flat = m.metric().flat(x);
        for (size_t i = 0; i < n; ++i) {
            row[i] = x[i];
            row[n + i] = CScalar(sign_plus) * flat[i];
        }
        row[2 * n] = rpart;
        return row;
    };

    CMatrix plus_span(0, r), minus_span(0, r);
    const RMatrix* Jp;
    const RMatrix* Jm;
    std::vector<Scalar> Xp;
    if (auto odd = std::get_if<ComponentsOdd>(&comps)) {
        Jp = &odd->J_plus;
        Jm = &odd->J_minus;
        Xp = odd->X_plus;
    } else {
        auto& even = std::get<ComponentsEven>(comps);
        if ((even.c_plus * even.c_plus) == Scalar(1))
            throw std::invalid_argument("eigenbundles: c+^2 = 1 (null X+-) is outside the closed forms");
        Jp = &even.J_plus;
        Jm = &even.J_minus;
    }
    Subspace Tp = holomorphic_distribution(*Jp);
    Subspace Tm = holomorphic_distribution(*Jm);
    for (size_t i = 0; i < Tp.rank(); ++i)
        plus_span.append_row(graph_row(Tp.basis_vector(i), Scalar(1), CScalar(Scalar(0))));
    // distinguished direction: X+ + g(X+) + i (odd), V- + g(V-) + i (even)
    std::vector<CScalar> dir;
    if (auto odd = std::get_if<ComponentsOdd>(&comps)) {
        dir = complexify(odd->X_plus);
    } else {
        auto& even = std::get<ComponentsEven>(comps);
        CScalar denom(Scalar(1) - even.c_plus * even.c_plus);
        dir.assign(n, CScalar(Scalar(0)));
        for (size_t i = 0; i < n; ++i)
            dir[i] = (CScalar(even.X_minus[i]) - CScalar::i() * CScalar(even.c_plus) * CScalar(even.X_plus[i])) /
                     denom;
    }
    plus_span.append_row(graph_row(dir, Scalar(1), CScalar::i()));
    for (size_t i = 0; i < Tm.rank(); ++i)
        minus_span.append_row(graph_row(Tm.basis_vector(i), Scalar(-1), CScalar(Scalar(0))));
    Subspace L1p_closed(r, plus_span);
    Subspace L1m_closed(r, minus_span);

    if (L1p_direct != L1p_closed || L1m_direct != L1m_closed)
        throw std::logic_error("eigenbundles: eigenspace intersection and closed forms disagree");
    return {L1, L1p_direct, L1m_direct};
}

/// Pass iff the anchor restricted to {u : F1 u = -F2 u} (cut to u0-perp
/// when n is even) has rank n, plus the kernel-section side conditions.
inline Report admissibility_check(const GenMetric& m, const BnACS& F1, const BnACS& F2) {
    Report rep;
    size_t n = m.n();
    size_t r = 2 * n + 1;
    bool commute = F1.matrix() * F2.matrix() == F2.matrix() * F1.matrix();
    rep.add("F1 F2 = F2 F1", commute);
    CMatrix k1 = complexify(F1.matrix()).kernel();
    CMatrix k2 = complexify(F2.matrix()).kernel();
    rep.add("common rank-one kernel", Subspace(r, k1) == Subspace(r, k2));

    RMatrix sumF = F1.matrix() + F2.matrix();
    CMatrix ker = complexify(sumF).kernel();
    Subspace S(r, ker);
    if (n % 2 == 0) {
        // intersect with u0-perp
        const BnElement& u0 = F1.u0();
        RMatrix G = pairing_gram(n);
        RMatrix perp_row(1, r);
        for (size_t a = 0; a < r; ++a) {
            Scalar v(0);
            for (size_t b = 0; b < r; ++b) v += G(a, b) * u0.coords()[b];
            perp_row(0, a) = v;
        }
        Subspace perp(r, complexify(perp_row).kernel());
        S = intersect(S, perp);
    }
    // anchor image rank
    CMatrix anchored(0, n);
    for (size_t i = 0; i < S.rank(); ++i) {
        auto v = S.basis_vector(i);
        anchored.append_row(std::vector<CScalar>(v.begin(), v.begin() + n));
    }
    size_t rank = anchored.rref_in_place();
    rep.add("anchor restricted to {F1 u = -F2 u} has rank n", rank == n,
            "rank " + std::to_string(rank));

    // Side conditions: G^end u0 = (-1)^n u0 and the compatibility identities
    // G(Fu, Fv) = G(u,v) - <u,u0><v,u0> and G(Fu, v) = -G(u, Fv), checked
    // over all basis pairs (bilinear, so this covers every element).
    BnEndo gend = m.gend();
    Scalar sign((n % 2 == 0) ? 1 : -1);
    BnElement gu = apply_endo(gend, F1.u0());
    rep.add("G^end(u0) = (-1)^n u0", gu == sign * F1.u0());
    auto Gb = [&](const BnElement& u, const BnElement& v) {
        return scalar_product(apply_endo(gend, u), v);
    };
    const BnElement& u0 = F1.u0();
    bool propg = true;
    for (size_t p = 0; p < r && propg; ++p)
        for (size_t q = 0; q < r; ++q) {
            BnElement u(n), v(n);
            std::vector<Scalar> cu(r, Scalar(0)), cv(r, Scalar(0));
            cu[p] = Scalar(1);
            cv[q] = Scalar(1);
            u = BnElement(n, cu);
            v = BnElement(n, cv);
            BnElement Fu = apply_endo(F1.matrix(), u), Fv = apply_endo(F1.matrix(), v);
            if (Gb(Fu, Fv) != Gb(u, v) - scalar_product(u, u0) * scalar_product(v, u0) ||
                Gb(Fu, v) != -Gb(u, Fv)) {
                propg = false;
                break;
            }
        }
    rep.add("G(Fu,Fv) = G(u,v) - <u,u0><v,u0> and G(Fu,v) = -G(u,Fv)", propg);
    return rep;
}

}  // namespace bnck
