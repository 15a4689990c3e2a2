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
#include "bnck/structures.hpp"

namespace bnck {

/// A pseudo-Hermitian instance bundled with its assembled endomorphism.
struct Instance {
    BnAlgebroid A;
    GenMetric gm;
    Components comps;
    BnACS acs;
};

inline Instance build_instance(BnAlgebroid A, PseudoMetric g, Components comps) {
    GenMetric gm(std::move(g));
    if (gm.n() != A.n()) throw std::invalid_argument("build_instance: dimension mismatch");
    BnACS acs = assemble(gm, comps);
    return Instance{std::move(A), std::move(gm), std::move(comps), std::move(acs)};
}

namespace detail {

/// Metric contractions of the twist forms: F(X) and H(X,Y) as vectors.
struct Musical {
    const BnAlgebroid& A;
    const PseudoMetric& g;

    template <class T>
    std::vector<T> Fvec(const std::vector<T>& x) const {
        size_t n = A.n();
        std::vector<T> cov(n, scalar_traits<T>::zero());
        for (size_t z = 0; z < n; ++z) {
            for (size_t a = 0; a < n; ++a) {
                Scalar c = A.F().coeff({a, z});
                if (!c.is_zero()) cov[z] += x[a] * T(c);
            }
        }
        return g.sharp(cov);
    }
    template <class T>
    std::vector<T> Hvec(const std::vector<T>& x, const std::vector<T>& y) const {
        size_t n = A.n();
        std::vector<T> cov(n, scalar_traits<T>::zero());
        for (size_t z = 0; z < n; ++z)
            for (size_t a = 0; a < n; ++a)
                for (size_t b = 0; b < n; ++b) {
                    Scalar c = A.H().coeff({a, b, z});
                    if (!c.is_zero()) cov[z] += x[a] * y[b] * T(c);
                }
        return g.sharp(cov);
    }
    /// Matrix of Y -> H(e_i, Y).
    RMatrix Hmat(size_t i) const {
        size_t n = A.n();
        RMatrix m(n, n);
        std::vector<Scalar> ei(n, Scalar(0));
        ei[i] = Scalar(1);
        for (size_t j = 0; j < n; ++j) {
            std::vector<Scalar> ej(n, Scalar(0));
            ej[j] = Scalar(1);
            auto v = Hvec(ei, ej);
            for (size_t k = 0; k < n; ++k) m(k, j) = v[k];
        }
        return m;
    }
    /// Matrix of Y -> g(a, Y) b.
    RMatrix outer(const std::vector<Scalar>& a, const std::vector<Scalar>& b) const {
        size_t n = A.n();
        RMatrix m(n, n);
        auto fa = g.flat(a);
        for (size_t k = 0; k < n; ++k)
            for (size_t j = 0; j < n; ++j) m(k, j) = fa[j] * b[k];
        return m;
    }
    template <class T>
    T Feval(const std::vector<T>& x, const std::vector<T>& y) const {
        return A.F().template eval<T>({x, y});
    }
    template <class T>
    T Heval(const std::vector<T>& x, const std::vector<T>& y, const std::vector<T>& z) const {
        return A.H().template eval<T>({x, y, z});
    }
};

inline bool preserves(const std::vector<RMatrix>& direction_matrices, const Subspace& T) {
    for (auto& N : direction_matrices) {
        CMatrix cn = complexify(N);
        for (size_t v = 0; v < T.rank(); ++v)
            if (!T.contains(cn.apply(T.basis_vector(v)))) return false;
    }
    return true;
}

inline bool vectors_equal(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

inline std::vector<Scalar> scale_vec(const Scalar& s, const std::vector<Scalar>& v) {
    std::vector<Scalar> r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
    return r;
}
inline std::vector<Scalar> add_vec(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
    std::vector<Scalar> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

}  // namespace detail

/// Pass iff the Dorfman bracket of every (ordered) pair of basis sections of
/// S stays in S.
inline Report bundle_closed(const BnAlgebroid& A, const Subspace& S) {
    Report rep;
    rep.method = "direct";
    if (S.ambient() != A.rank()) throw std::invalid_argument("bundle_closed: ambient mismatch");
    bool ok = true;
    std::string witness;
    for (size_t i = 0; i < S.rank() && ok; ++i)
        for (size_t j = 0; j < S.rank(); ++j) {
            CBnElement u(A.n(), S.basis_vector(i));
            CBnElement v(A.n(), S.basis_vector(j));
            CBnElement w = A.dorfman(u, v);
            if (!S.contains(w.coords())) {
                ok = false;
                witness = "basis pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
                break;
            }
        }
    rep.add("closed under the Dorfman bracket", ok, witness);
    return rep;
}

/// Direct route: L1, L1+, L1- Dorfman-closed and L_{u0} preserves L1-;
/// on pass additionally asserts L_{u0}F = 0 and L_{u0}G^end = 0.
inline Report check_direct(const BnAlgebroid& A, const GenMetric& m, const BnACS& acs) {
    Report rep;
    rep.method = "direct";
    size_t r = A.rank();
    Subspace L1 = eigenspace(complexify(acs.matrix()), CScalar::i());
    Subspace Ep(r, complexify(m.eplus_basis()));
    Subspace Em(r, complexify(m.eminus_basis()));
    Subspace L1p = intersect(L1, Ep);
    Subspace L1m = intersect(L1, Em);
    rep.add("rank L1 = n", L1.rank() == A.n(), "rank " + std::to_string(L1.rank()));
    rep.merge(bundle_closed(A, L1), "L1: ");
    rep.merge(bundle_closed(A, L1p), "L1+: ");
    rep.merge(bundle_closed(A, L1m), "L1-: ");

    const BnElement& u0 = acs.u0();
    CBnElement cu0 = complexify(u0);
    bool ok = true;
    std::string witness;
    for (size_t i = 0; i < L1m.rank(); ++i) {
        CBnElement v(A.n(), L1m.basis_vector(i));
        if (!L1m.contains(A.dorfman(cu0, v).coords())) {
            ok = false;
            witness = "basis vector " + std::to_string(i + 1);
            break;
        }
    }
    rep.add("L_{u0} preserves L1-", ok, witness);

    if (rep.pass()) {
        BnEndo lf = A.dorfman_lie_derivative(u0, acs.matrix());
        rep.add("L_{u0} F = 0 (consequence)", lf.is_zero());
        BnEndo lg = A.dorfman_lie_derivative(u0, m.gend());
        rep.add("L_{u0} G^end = 0 (consequence)", lg.is_zero());
    }
    return rep;
}

/// check_direct on the second structure F2 = G^end F as well: the
/// definition-level test (both eigenbundles closed). Used as a test oracle.
inline Report check_direct_definition(const BnAlgebroid& A, const GenMetric& m, const BnACS& acs) {
    Report rep;
    rep.method = "direct";
    Subspace L1 = eigenspace(complexify(acs.matrix()), CScalar::i());
    Subspace L2 = eigenspace(complexify(m.gend() * acs.matrix()), CScalar::i());
    rep.add("rank L1 = n", L1.rank() == A.n());
    rep.add("rank L2 = n", L2.rank() == A.n());
    rep.merge(bundle_closed(A, L1), "L1: ");
    rep.merge(bundle_closed(A, L2), "L2: ");
    return rep;
}

namespace detail {

/// The dim-3 shortcut: i_{X-}F = 0 plus the two covariant-derivative
/// relations written with the Levi-Civita connection.
inline bool reduced_odd_dim3(const Musical& mu, const Connection& conn, const ComponentsOdd& c) {
    size_t n = 3;
    for (size_t z = 0; z < n; ++z) {
        std::vector<Scalar> ez(n, Scalar(0));
        ez[z] = Scalar(1);
        if (!mu.Feval(c.X_minus, ez).is_zero()) return false;
    }
    RMatrix Jp = c.J_plus;
    for (size_t i = 0; i < n; ++i) {
        std::vector<Scalar> ei(n, Scalar(0));
        ei[i] = Scalar(1);
        auto lhs1 = conn.derive(i, c.X_minus);
        auto rhs1 = scale_vec(Scalar(-1, 2), mu.Hvec(ei, c.X_minus));
        if (!vectors_equal(lhs1, rhs1)) return false;
        auto lhs2 = conn.derive(i, c.X_plus);
        auto rhs2 = add_vec(scale_vec(Scalar(-1, 2), mu.Hvec(c.X_plus, ei)),
                            scale_vec(Scalar(-1), Jp.apply(mu.Fvec(ei))));
        if (!vectors_equal(lhs2, rhs2)) return false;
    }
    return true;
}

}  // namespace detail

/// Component route, odd parity: connections nabla^- = nabla + H(X)/2 and
/// nabla^+ = nabla - H(X)/2 - J+F(X) (x) X+ preserve the holomorphic
/// distributions, the unit fields are parallel in the stated sense, and the
/// algebraic constraints between H, F and the distributions hold.
inline Report check_odd(const BnAlgebroid& A, const GenMetric& m, const ComponentsOdd& c) {
    size_t n = A.n();
    if (n % 2 == 0) throw std::invalid_argument("check_odd: even-dimensional algebra");
    Report rep;
    rep.method = "components";
    Report valid = c.validate();
    rep.merge(valid, "components: ");
    if (!valid.pass()) return rep;

    const PseudoMetric& g = m.metric();
    detail::Musical mu{A, g};
    Connection conn = levi_civita(A.algebra(), g);
    Scalar half(1, 2);

    std::vector<RMatrix> nminus, nplus;
    for (size_t i = 0; i < n; ++i) {
        RMatrix gamma = conn.direction_matrix(i);
        RMatrix h = mu.Hmat(i);
        std::vector<Scalar> ei(n, Scalar(0));
        ei[i] = Scalar(1);
        RMatrix coupling = mu.outer(c.J_plus.apply(mu.Fvec(ei)), c.X_plus);
        nminus.push_back(gamma + half * h);
        nplus.push_back(gamma - half * h - coupling);
    }
    Subspace Tp = holomorphic_distribution(c.J_plus);
    Subspace Tm = holomorphic_distribution(c.J_minus);
    rep.add("nabla^- preserves (1,0) of J-", detail::preserves(nminus, Tm));
    rep.add("nabla^+ preserves (1,0) of J+", detail::preserves(nplus, Tp));

    bool par_minus = true, par_plus = true;
    std::string wminus, wplus;
    for (size_t i = 0; i < n; ++i) {
        auto dm = nminus[i].apply(c.X_minus);
        for (auto& v : dm)
            if (!v.is_zero()) {
                par_minus = false;
                wminus = "direction " + std::to_string(i + 1);
            }
        std::vector<Scalar> ei(n, Scalar(0));
        ei[i] = Scalar(1);
        auto dp = nplus[i].apply(c.X_plus);
        auto want = detail::scale_vec(Scalar(-1), c.J_plus.apply(mu.Fvec(ei)));
        if (!detail::vectors_equal(dp, want)) {
            par_plus = false;
            wplus = "direction " + std::to_string(i + 1);
        }
    }
    rep.add("nabla^-_X X- = 0", par_minus, wminus);
    rep.add("nabla^+_X X+ = -J+ F(X)", par_plus, wplus);

    auto cXp = complexify(c.X_plus);
    auto cXm = complexify(c.X_minus);
    auto pair_checks = [&](const Subspace& T, const std::string& tag) {
        bool h3 = true, ok_mix = true, okF = true, okHm = true;
        for (size_t a = 0; a < T.rank(); ++a)
            for (size_t b = 0; b < T.rank(); ++b) {
                auto va = T.basis_vector(a);
                auto vb = T.basis_vector(b);
                for (size_t cidx = 0; cidx < T.rank(); ++cidx) {
                    auto vc = T.basis_vector(cidx);
                    if (!mu.Heval(va, vb, vc).is_zero()) h3 = false;
                }
                if (tag == "+") {
                    CScalar lhs = mu.Heval(cXp, va, vb);
                    CScalar rhs = CScalar::i() * mu.Feval(va, vb);
                    if (lhs != rhs) ok_mix = false;
                } else {
                    if (!mu.Heval(cXm, va, vb).is_zero()) okHm = false;
                    if (!mu.Feval(va, vb).is_zero()) okF = false;
                }
            }
        rep.add("H on (1,0)^3 of J" + tag + " = 0", h3);
        if (tag == "+")
            rep.add("i_{X+}H = i F on (1,0)^2 of J+", ok_mix);
        else {
            rep.add("i_{X-}H = 0 on (1,0)^2 of J-", okHm);
            rep.add("F = 0 on (1,0)^2 of J-", okF);
        }
    };
    pair_checks(Tp, "+");
    pair_checks(Tm, "-");

    bool ixf = true;
    for (size_t z = 0; z < n; ++z) {
        std::vector<Scalar> ez(n, Scalar(0));
        ez[z] = Scalar(1);
        if (!mu.Feval(c.X_minus, ez).is_zero()) ixf = false;
    }
    rep.add("i_{X-} F = 0", ixf);

    if (n == 3) {
        bool reduced = detail::reduced_odd_dim3(mu, conn, c);
        bool full = rep.pass();
        rep.add("dim-3 reduced test agrees with the full test", reduced == full,
                reduced ? "reduced pass, full fail" : "reduced fail, full pass");
        // fold the reduced verdict in as the authoritative one is identical
    }
    return rep;
}

namespace detail {

inline bool reduced_even_dim4(const Musical& mu, const Connection& conn, const ComponentsEven& c) {
    size_t n = 4;
    // covariant derivatives
    for (size_t i = 0; i < n; ++i) {
        std::vector<Scalar> ei(n, Scalar(0));
        ei[i] = Scalar(1);
        auto lhs1 = conn.derive(i, c.X_plus);
        auto rhs1 = add_vec(scale_vec(Scalar(-1, 2), mu.Hvec(c.X_plus, ei)),
                            scale_vec(c.c_plus, mu.Fvec(ei)));
        if (!vectors_equal(lhs1, rhs1)) return false;
        auto lhs2 = conn.derive(i, c.X_minus);
        auto rhs2 = add_vec(scale_vec(Scalar(-1, 2), mu.Hvec(c.X_minus, ei)),
                            scale_vec(Scalar(-1), c.J_plus.apply(mu.Fvec(ei))));
        if (!vectors_equal(lhs2, rhs2)) return false;
    }
    // D^- preserves J- as an endomorphism
    Scalar half(1, 2);
    for (size_t i = 0; i < n; ++i) {
        RMatrix D = conn.direction_matrix(i) + half * mu.Hmat(i);
        if (!(D * c.J_minus - c.J_minus * D).is_zero()) return false;
    }
    // F of type (1,1) w.r.t. J-: F(J-x, J-y) = F(x,y)
    for (size_t a = 0; a < n; ++a)
        for (size_t b = a + 1; b < n; ++b) {
            std::vector<Scalar> ea(n, Scalar(0)), eb(n, Scalar(0));
            ea[a] = Scalar(1);
            eb[b] = Scalar(1);
            if (mu.Feval(c.J_minus.apply(ea), c.J_minus.apply(eb)) != mu.Feval(ea, eb)) return false;
        }
    // i_{X+}F = 0 (c+ constant)
    for (size_t z = 0; z < n; ++z) {
        std::vector<Scalar> ez(n, Scalar(0));
        ez[z] = Scalar(1);
        if (!mu.Feval(c.X_plus, ez).is_zero()) return false;
    }
    // H(X+, X-) = c+ F(X-) + J+ F(X+)
    auto lhs = mu.Hvec(c.X_plus, c.X_minus);
    auto rhs = add_vec(scale_vec(c.c_plus, mu.Fvec(c.X_minus)), c.J_plus.apply(mu.Fvec(c.X_plus)));
    return vectors_equal(lhs, rhs);
}

inline bool reduced_even_dim2(const Musical& mu, const Connection& conn, const ComponentsEven& c) {
    size_t n = 2;
    // epsilon_0 with J- X+ = -eps0 X-, then J+ = eps0 c+ J-
    auto jxp = c.J_minus.apply(c.X_plus);
    std::optional<Scalar> eps0;
    for (int s : {1, -1}) {
        bool all = true;
        for (size_t i = 0; i < n; ++i)
            if (jxp[i] != Scalar(-s) * c.X_minus[i]) all = false;
        if (all) eps0 = Scalar(s);
    }
    if (!eps0) return false;
    if (c.J_plus != (*eps0 * c.c_plus) * c.J_minus) return false;
    if (c.c_plus.is_zero()) {
        for (size_t i = 0; i < n; ++i) {
            auto d = conn.derive(i, c.X_plus);
            for (auto& v : d)
                if (!v.is_zero()) return false;
        }
        return mu.A.F().is_zero();
    }
    for (size_t i = 0; i < n; ++i) {
        std::vector<Scalar> ei(n, Scalar(0));
        ei[i] = Scalar(1);
        if (!vectors_equal(conn.derive(i, c.X_plus), scale_vec(c.c_plus, mu.Fvec(ei)))) return false;
    }
    for (size_t z = 0; z < n; ++z) {
        std::vector<Scalar> ez(n, Scalar(0));
        ez[z] = Scalar(1);
        if (!mu.Feval(c.X_plus, ez).is_zero()) return false;
    }
    return true;
}

}  // namespace detail

/// Component route, even parity, non-null X+- (c+^2 != 1 required).
inline Report check_even(const BnAlgebroid& A, const GenMetric& m, const ComponentsEven& c) {
    size_t n = A.n();
    if (n % 2 == 1) throw std::invalid_argument("check_even: odd-dimensional algebra");
    if (c.c_plus * c.c_plus == Scalar(1))
        throw std::invalid_argument(
            "check_even: c+^2 = 1 makes X+- null; the non-null hypothesis fails (use the classical "
            "reduction when X+ = X- = 0)");
    Report rep;
    rep.method = "components";
    Report valid = c.validate();
    rep.merge(valid, "components: ");
    if (!valid.pass()) return rep;

    const PseudoMetric& g = m.metric();
    detail::Musical mu{A, g};
    Connection conn = levi_civita(A.algebra(), g);
    Scalar half(1, 2);
    Scalar denom = Scalar(1) - c.c_plus * c.c_plus;

    std::vector<RMatrix> dminus, dplus;
    for (size_t i = 0; i < n; ++i) {
        RMatrix gamma = conn.direction_matrix(i);
        RMatrix h = mu.Hmat(i);
        std::vector<Scalar> ei(n, Scalar(0));
        ei[i] = Scalar(1);
        auto fi = mu.Fvec(ei);
        RMatrix couple_p = mu.outer(fi, c.X_plus);
        RMatrix couple_m = mu.outer(c.J_plus.apply(fi), c.X_minus);
        dminus.push_back(gamma + half * h);
        dplus.push_back(gamma - half * h + (c.c_plus / denom) * couple_p - (Scalar(1) / denom) * couple_m);
    }
    Subspace Tp = holomorphic_distribution(c.J_plus);
    Subspace Tm = holomorphic_distribution(c.J_minus);
    rep.add("D^- preserves (1,0) of J-", detail::preserves(dminus, Tm));
    rep.add("D^+ preserves (1,0) of J+", detail::preserves(dplus, Tp));

    auto lie = A.algebra().bracket(c.X_plus, c.X_minus);
    bool commute = true;
    for (auto& v : lie) commute = commute && v.is_zero();
    rep.add("[X+, X-] = 0", commute);

    bool cov_p = true, cov_m = true;
    for (size_t i = 0; i < n; ++i) {
        std::vector<Scalar> ei(n, Scalar(0));
        ei[i] = Scalar(1);
        auto lhs1 = conn.derive(i, c.X_plus);
        auto rhs1 = detail::add_vec(detail::scale_vec(Scalar(-1, 2), mu.Hvec(c.X_plus, ei)),
                                    detail::scale_vec(c.c_plus, mu.Fvec(ei)));
        cov_p = cov_p && detail::vectors_equal(lhs1, rhs1);
        auto lhs2 = conn.derive(i, c.X_minus);
        auto rhs2 = detail::add_vec(detail::scale_vec(Scalar(-1, 2), mu.Hvec(c.X_minus, ei)),
                                    detail::scale_vec(Scalar(-1), c.J_plus.apply(mu.Fvec(ei))));
        cov_m = cov_m && detail::vectors_equal(lhs2, rhs2);
    }
    rep.add("nabla_X X+ = -(i_{X+}H)(X)/2 + c+ F(X)", cov_p);
    rep.add("nabla_X X- = -(i_{X-}H)(X)/2 - J+ F(X)", cov_m);

    auto cXp = complexify(c.X_plus);
    auto cXm = complexify(c.X_minus);
    bool f_m = true, h3p = true, h3m = true, mix_p = true, rel_fh = true;
    for (size_t a = 0; a < Tm.rank(); ++a)
        for (size_t b = 0; b < Tm.rank(); ++b) {
            auto va = Tm.basis_vector(a);
            auto vb = Tm.basis_vector(b);
            if (!mu.Feval(va, vb).is_zero()) f_m = false;
            for (size_t cc = 0; cc < Tm.rank(); ++cc)
                if (!mu.Heval(va, vb, Tm.basis_vector(cc)).is_zero()) h3m = false;
        }
    for (size_t a = 0; a < Tp.rank(); ++a)
        for (size_t b = 0; b < Tp.rank(); ++b) {
            auto va = Tp.basis_vector(a);
            auto vb = Tp.basis_vector(b);
            for (size_t cc = 0; cc < Tp.rank(); ++cc)
                if (!mu.Heval(va, vb, Tp.basis_vector(cc)).is_zero()) h3p = false;
            CScalar mixed = mu.Heval(cXp, va, vb) + CScalar::i() * CScalar(c.c_plus) * mu.Heval(cXm, va, vb);
            if (!mixed.is_zero()) mix_p = false;
            CScalar lhs = mu.Feval(va, vb);
            CScalar rhs = -CScalar::i() * mu.Heval(cXm, va, vb);
            if (lhs != rhs) rel_fh = false;
        }
    rep.add("F = 0 on (1,0)^2 of J-", f_m);
    rep.add("H on (1,0)^3 of J+ = 0", h3p);
    rep.add("H on (1,0)^3 of J- = 0", h3m);
    rep.add("i_{X+ + i c+ X-} H = 0 on (1,0)^2 of J+", mix_p);
    rep.add("F = -i (i_{X-}H) on (1,0)^2 of J+", rel_fh);

    bool ixf = true;
    for (size_t z = 0; z < n; ++z) {
        std::vector<Scalar> ez(n, Scalar(0));
        ez[z] = Scalar(1);
        if (!mu.Feval(c.X_plus, ez).is_zero()) ixf = false;
    }
    rep.add("i_{X+} F = 0 (dc+ = 0 for constant c+)", ixf);

    // Exchange form of the commutation condition.
    auto lhs = mu.Hvec(c.X_plus, c.X_minus);
    auto rhs = detail::add_vec(detail::scale_vec(c.c_plus, mu.Fvec(c.X_minus)),
                               c.J_plus.apply(mu.Fvec(c.X_plus)));
    bool exchange = detail::vectors_equal(lhs, rhs);
    if (cov_p && cov_m)
        rep.add("exchange relation H(X+,X-) = c+F(X-) + J+F(X+) matches [X+,X-] = 0", exchange == commute,
                exchange ? "relation holds, fields do not commute" : "relation fails, fields commute");

    if (n == 4) {
        bool reduced = detail::reduced_even_dim4(mu, conn, c);
        rep.add("dim-4 reduced test agrees with the full test", reduced == rep.pass());
    } else if (n == 2) {
        bool reduced = detail::reduced_even_dim2(mu, conn, c);
        rep.add("dim-2 reduced test agrees with the full test", reduced == rep.pass());
    }
    return rep;
}

/// Dispatcher for the component route.
inline Report check_components(const Instance& inst) {
    if (auto odd = std::get_if<ComponentsOdd>(&inst.comps)) return check_odd(inst.A, inst.gm, *odd);
    return check_even(inst.A, inst.gm, std::get<ComponentsEven>(inst.comps));
}

/// Runs both routes and asserts their agreement.
inline Report check_both(const Instance& inst) {
    Report direct = check_direct(inst.A, inst.gm, inst.acs);
    Report comp = check_components(inst);
    Report rep;
    rep.method = "both";
    rep.merge(direct, "direct: ");
    rep.merge(comp, "components: ");
    rep.add("direct and component routes agree", direct.pass() == comp.pass(),
            std::string("direct ") + (direct.pass() ? "pass" : "fail") + ", components " +
                (comp.pass() ? "pass" : "fail"));
    return rep;
}

/// Odd-parity rescaling: g -> l^2 g, X+- -> X+-/l, H -> l^2 H, F -> l F.
inline Instance rescale_odd(const Instance& inst, const Scalar& lambda) {
    if (lambda.is_zero()) throw std::invalid_argument("rescale: lambda must be nonzero");
    auto& c = std::get<ComponentsOdd>(inst.comps);
    Scalar l2 = lambda * lambda;
    KForm H = l2 * inst.A.H();
    KForm F = lambda * inst.A.F();
    ComponentsOdd nc{l2 * c.g, c.J_plus, c.J_minus, detail::scale_vec(Scalar(1) / lambda, c.X_plus),
                     detail::scale_vec(Scalar(1) / lambda, c.X_minus)};
    return build_instance(BnAlgebroid(inst.A.algebra(), H, F), PseudoMetric(nc.g), nc);
}

/// Even-parity rescaling to c+ = 0 (requires F = 0 and c+ not in {-1,0,1}):
/// g -> eps g, X+- -> |1-c+^2|^{-1/2} X+-, J+ killed on span{X+,X-}, H -> eps H.
inline Instance rescale_even_to_unit(const Instance& inst) {
    auto& c = std::get<ComponentsEven>(inst.comps);
    Scalar c2 = c.c_plus * c.c_plus;
    if (c.c_plus.is_zero() || c2 == Scalar(1))
        throw std::invalid_argument("rescale: c+ must avoid {-1, 0, 1}");
    if (!inst.A.F().is_zero()) throw std::invalid_argument("rescale: even rescaling requires F = 0");
    Scalar one_m = Scalar(1) - c2;
    Scalar eps(one_m.sign());
    Scalar absval = one_m.abs();
    auto root = absval.sqrt();
    if (!root) {
        if (absval.exact())
            throw std::invalid_argument("rescale: |1-c+^2| = " + absval.str() +
                                        " is not a perfect rational square; use numeric mode");
        root = absval.as_numeric().sqrt();
    }
    Scalar scale = Scalar(1) / *root;

    PseudoMetric g(c.g);
    // remove the span{X+,X-} action of J+: J+ (Id - P), P the g-orthogonal
    // projection onto span{X+,X-}
    RMatrix P = (Scalar(1) / one_m) *
                (detail::rank_one_update(g, c.X_plus, c.X_plus) +
                 detail::rank_one_update(g, c.X_minus, c.X_minus));
    RMatrix Jp = c.J_plus * (RMatrix::identity(g.dim()) - P);
    ComponentsEven nc{eps * c.g,
                      Jp,
                      c.J_minus,
                      detail::scale_vec(scale, c.X_plus),
                      detail::scale_vec(scale, c.X_minus),
                      Scalar(0)};
    KForm H = eps * inst.A.H();
    return build_instance(BnAlgebroid(inst.A.algebra(), H, inst.A.F()), PseudoMetric(nc.g), nc);
}

/// Classical reduction (even parity, X+ = X- = 0, c+^2 = 1): pass iff F = 0,
/// both J's are integrable complex structures and nabla +- H/2 preserves the
/// opposite J.
inline Report classical_reduction_check(const BnAlgebroid& A, const GenMetric& m,
                                        const ComponentsEven& c) {
    size_t n = A.n();
    if (n % 2 == 1) throw std::invalid_argument("classical_reduction_check: odd dimension");
    for (auto& v : c.X_plus)
        if (!v.is_zero()) throw std::invalid_argument("classical_reduction_check: X+ must vanish");
    for (auto& v : c.X_minus)
        if (!v.is_zero()) throw std::invalid_argument("classical_reduction_check: X- must vanish");
    Report rep;
    rep.method = "components";
    Report valid = c.validate();
    rep.merge(valid, "components: ");
    if (!valid.pass()) return rep;
    rep.add("J+ almost complex", c.J_plus * c.J_plus == -RMatrix::identity(n));

    rep.add("F = 0", A.F().is_zero());
    const PseudoMetric& g = m.metric();
    detail::Musical mu{A, g};
    Connection conn = levi_civita(A.algebra(), g);
    Scalar half(1, 2);
    auto involutive = [&](const RMatrix& J) {
        Subspace T = holomorphic_distribution(J);
        for (size_t a = 0; a < T.rank(); ++a)
            for (size_t b = 0; b < T.rank(); ++b)
                if (!T.contains(A.algebra().bracket(T.basis_vector(a), T.basis_vector(b)))) return false;
        return true;
    };
    rep.add("J+ integrable (involutive (1,0))", involutive(c.J_plus));
    rep.add("J- integrable (involutive (1,0))", involutive(c.J_minus));
    bool dplus_ok = true, dminus_ok = true;
    for (size_t i = 0; i < n; ++i) {
        RMatrix Dm = conn.direction_matrix(i) + half * mu.Hmat(i);
        RMatrix Dp = conn.direction_matrix(i) - half * mu.Hmat(i);
        if (!(Dm * c.J_minus - c.J_minus * Dm).is_zero()) dminus_ok = false;
        if (!(Dp * c.J_plus - c.J_plus * Dp).is_zero()) dplus_ok = false;
    }
    rep.add("nabla + H/2 preserves J-", dminus_ok);
    rep.add("nabla - H/2 preserves J+", dplus_ok);
    return rep;
}

}  // namespace bnck
