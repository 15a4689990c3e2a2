#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bnck/integrability.hpp"

namespace bnck {

using ParamMap = std::map<std::string, Scalar>;

/// One family of verified examples: admissible parameters generate instances
/// that must pass the matching integrability checker.
struct CatalogEntry {
    std::string name;
    std::string parity;  // "odd" | "even"
    std::string description;
    std::vector<std::string> slots;
    std::function<std::optional<std::string>(const ParamMap&)> admissible;  // error text when not
    std::function<Instance(const ParamMap&)> generate;
    std::vector<ParamMap> samples;  // deterministic admissible sample points (may be empty)
};

namespace detail {

inline Scalar at(const ParamMap& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw std::invalid_argument("missing parameter '" + key + "'");
    return it->second;
}
inline int sign_at(const ParamMap& p, const std::string& key) {
    Scalar s = at(p, key);
    if (s == Scalar(1)) return 1;
    if (s == Scalar(-1)) return -1;
    throw std::invalid_argument("parameter '" + key + "' must be +1 or -1");
}

inline RMatrix diag(const std::vector<Scalar>& d) {
    RMatrix m(d.size(), d.size());
    for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

/// Plane rotation J with J p = t q, J q = -(1/t) p on span{p, q}, zero on a
/// complement spanned by `rest`; t^2 = g(p,p)/g(q,q) must be a rational
/// square for the exact path.
inline std::optional<RMatrix> plane_rotation(const PseudoMetric& g, const std::vector<Scalar>& p,
                                             const std::vector<Scalar>& q, int orientation) {
    size_t n = g.dim();
    Scalar gp = g.inner(p, p), gq = g.inner(q, q);
    if (gp.is_zero() || gq.is_zero() || !g.inner(p, q).is_zero()) return std::nullopt;
    Scalar ratio = gp / gq;
    if (ratio.sign() <= 0) return std::nullopt;  // plane not definite
    auto root = ratio.sqrt();
    if (!root) {
        if (ratio.exact()) return std::nullopt;
        root = ratio.as_numeric().sqrt();
    }
    Scalar t = Scalar(orientation) * *root;
    // columns: J expressed on the basis {p, q} then transported to e-coords
    // via the relations J(p) = t q, J(q) = -(1/t) p; outside span{p,q}: 0.
    // Build with the dual covectors of p, q on span{p,q}: x -> g(x,p)/gp etc.
    RMatrix J(n, n);
    auto fp = g.flat(p);
    auto fq = g.flat(q);
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < n; ++i)
            J(i, j) += t * q[i] * (fp[j] / gp) - (Scalar(1) / t) * p[i] * (fq[j] / gq);
    return J;
}

}  // namespace detail

// --------------------------------------------------------------------------
// Catalog entries
// --------------------------------------------------------------------------

inline CatalogEntry entry_dim2_abelian() {
    CatalogEntry e;
    e.name = "dim2-abelian";
    e.parity = "even";
    e.description =
        "Abelian dim-2 family: g = eps Id, X+ = y v2, X- = y v1, J- the eps0 rotation, "
        "J+ = eps0 c+ J-, c+ = eps_plus sqrt(1 - eps y^2), H = F = 0.";
    e.slots = {"y", "eps", "eps0", "eps_plus"};
    e.admissible = [](const ParamMap& p) -> std::optional<std::string> {
        Scalar y = detail::at(p, "y");
        int eps = detail::sign_at(p, "eps");
        detail::sign_at(p, "eps0");
        detail::sign_at(p, "eps_plus");
        if (y.is_zero()) return "y = 0 gives c+ = +-1 (null X+-)";
        Scalar rad = Scalar(1) - Scalar(eps) * y * y;
        if (rad.sign() <= 0) return "1 - eps y^2 <= 0: |y| >= 1 is outside the family for eps = 1";
        if (rad.exact() && !rad.sqrt())
            return "1 - eps y^2 = " + rad.str() + " is not a perfect rational square; use numeric mode";
        return std::nullopt;
    };
    e.generate = [](const ParamMap& p) {
        Scalar y = detail::at(p, "y");
        int eps = detail::sign_at(p, "eps");
        int eps0 = detail::sign_at(p, "eps0");
        int epsp = detail::sign_at(p, "eps_plus");
        LieAlgebra L(2);
        Scalar rad = Scalar(1) - Scalar(eps) * y * y;
        auto root = rad.sqrt();
        if (!root) root = rad.as_numeric().sqrt();
        Scalar cp = Scalar(epsp) * *root;
        RMatrix Jm(2, 2);
        Jm(0, 1) = Scalar(-eps0);
        Jm(1, 0) = Scalar(eps0);
        ComponentsEven c{detail::diag({Scalar(eps), Scalar(eps)}),
                         (Scalar(eps0) * cp) * Jm,
                         Jm,
                         {Scalar(0), y},
                         {y, Scalar(0)},
                         cp};
        return build_instance(BnAlgebroid::untwisted(L), PseudoMetric(c.g), c);
    };
    for (int eps0 : {1, -1})
        for (int epsp : {1, -1}) {
            for (auto& y : {Scalar(3, 5), Scalar(4, 5), Scalar(5, 13), Scalar(12, 13), Scalar(-3, 5),
                            Scalar(8, 17), Scalar(7, 25)})
                e.samples.push_back({{"y", y},
                                     {"eps", Scalar(1)},
                                     {"eps0", Scalar(eps0)},
                                     {"eps_plus", Scalar(epsp)}});
            for (auto& y : {Scalar(3, 4), Scalar(4, 3), Scalar(5, 12), Scalar(-8, 15)})
                e.samples.push_back({{"y", y},
                                     {"eps", Scalar(-1)},
                                     {"eps0", Scalar(eps0)},
                                     {"eps_plus", Scalar(epsp)}});
        }
    return e;
}

namespace detail {
/// Valid (X, J) completions used by the odd dim-3 families.
inline ComponentsOdd dim3_components(const PseudoMetric& g, const std::vector<Scalar>& Xminus,
                                     const std::vector<Scalar>& Xplus, int jm_orient, int jp_orient) {
    size_t n = 3;
    auto complement = [&](const std::vector<Scalar>& X) {
        // rational basis of X-perp
        RMatrix row(1, n);
        for (size_t j = 0; j < n; ++j) row(0, j) = g.flat(X)[j];
        CMatrix ker = complexify(row).kernel();
        std::vector<std::vector<Scalar>> basis;
        for (size_t i = 0; i < ker.rows(); ++i) {
            std::vector<Scalar> v(n);
            for (size_t j = 0; j < n; ++j) v[j] = ker(i, j).re;
            basis.push_back(v);
        }
        // orthogonalize (both vectors anisotropic after a combo fix if needed)
        auto& p = basis[0];
        auto& q = basis[1];
        if (g.inner(p, p).is_zero()) std::swap(p, q);
        if (g.inner(p, p).is_zero()) {
            for (size_t j = 0; j < n; ++j) p[j] += q[j];
        }
        Scalar f = g.inner(p, q) / g.inner(p, p);
        for (size_t j = 0; j < n; ++j) q[j] -= f * p[j];
        return std::pair{p, q};
    };
    auto [pm, qm] = complement(Xminus);
    auto [pp, qp] = complement(Xplus);
    auto Jm = plane_rotation(g, pm, qm, jm_orient);
    auto Jp = plane_rotation(g, pp, qp, jp_orient);
    if (!Jm || !Jp)
        throw std::invalid_argument(
            "dim3 components: no g-skew complex structure exists on the orthogonal plane "
            "(it must be definite with square norm ratio)");
    return ComponentsOdd{g.matrix(), *Jp, *Jm, Xplus, Xminus};
}
}  // namespace detail

inline CatalogEntry entry_dim3_iso2() {
    CatalogEntry e;
    e.name = "dim3-iso2";
    e.parity = "odd";
    e.description =
        "Unimodular dim-3 family on iso(2) = so(2) x| R^2: brackets [v1,v2] = eps lam v3, "
        "[v3,v1] = 0, [v2,v3] = eps lam v1, g = diag(eps, 1, eps), X- = v2, X+ = s v2, H = F = 0.";
    e.slots = {"lambda", "eps", "s"};
    e.admissible = [](const ParamMap& p) -> std::optional<std::string> {
        if (detail::at(p, "lambda").is_zero()) return "lambda must be nonzero (abelian case is dim3-abelian)";
        detail::sign_at(p, "eps");
        detail::sign_at(p, "s");
        return std::nullopt;
    };
    e.generate = [](const ParamMap& p) {
        Scalar lam = detail::at(p, "lambda");
        int eps = detail::sign_at(p, "eps");
        int s = detail::sign_at(p, "s");
        LieAlgebra L(3);
        L.set_bracket(0, 1, 2, Scalar(eps) * lam);
        L.set_bracket(1, 2, 0, Scalar(eps) * lam);
        PseudoMetric g = PseudoMetric::diagonal({Scalar(eps), Scalar(1), Scalar(eps)});
        std::vector<Scalar> Xm = {Scalar(0), Scalar(1), Scalar(0)};
        std::vector<Scalar> Xp = {Scalar(0), Scalar(s), Scalar(0)};
        ComponentsOdd c = detail::dim3_components(g, Xm, Xp, 1, 1);
        return build_instance(BnAlgebroid::untwisted(L), g, c);
    };
    for (auto& lam : {Scalar(1), Scalar(2), Scalar(-1), Scalar(1, 2), Scalar(3, 2), Scalar(-2, 3),
                      Scalar(3), Scalar(-3, 5), Scalar(5, 2), Scalar(7, 3)})
        for (int eps : {1, -1})
            e.samples.push_back({{"lambda", lam}, {"eps", Scalar(eps)}, {"s", Scalar(eps == 1 ? 1 : -1)}});
    return e;
}

inline CatalogEntry entry_dim3_iso11() {
    CatalogEntry e;
    e.name = "dim3-iso11";
    e.parity = "odd";
    e.description =
        "Entry for the iso(1,1) = so(1,1) x| R^2 sign pattern (eps1 eps3 = -1). The family is "
        "empty: the orthogonal plane of the unit Killing field X- = v2 has signature (1,1), and a "
        "g-skew endomorphism J with J^2 = -Id exists on a 2-plane only when the metric there is "
        "definite. No parameters are admissible.";
    e.slots = {"lambda", "eps1", "eps3", "s"};
    e.admissible = [](const ParamMap&) -> std::optional<std::string> {
        return "empty family: X-perp is a Lorentzian plane, which admits no g-skew complex structure";
    };
    e.generate = [](const ParamMap&) -> Instance {
        throw std::invalid_argument("dim3-iso11: the family is empty (no valid J+- completion exists)");
    };
    return e;
}

inline CatalogEntry entry_dim3_abelian() {
    CatalogEntry e;
    e.name = "dim3-abelian";
    e.parity = "odd";
    e.description =
        "Abelian dim-3 family: g = diag(1, eps, eps); X- and X+ picked independently from rational "
        "unit fields with definite orthogonal complement; H = F = 0.";
    e.slots = {"eps", "km", "kx", "s"};
    auto unit_field = [](int eps, long k, int s) -> std::vector<Scalar> {
        // catalog of rational unit vectors with definite complement
        if (eps == 1) {
            static const std::vector<std::pair<Scalar, Scalar>> circle = {
                {Scalar(1), Scalar(0)},     {Scalar(3, 5), Scalar(4, 5)}, {Scalar(4, 5), Scalar(-3, 5)},
                {Scalar(5, 13), Scalar(12, 13)}, {Scalar(8, 17), Scalar(15, 17)}};
            auto& c = circle[size_t(k) % circle.size()];
            return {Scalar(s) * c.first, Scalar(s) * c.second, Scalar(0)};
        }
        // g = diag(1,-1,-1): unit space-like with definite complement
        static const std::vector<std::pair<Scalar, Scalar>> hyper = {
            {Scalar(1), Scalar(0)}, {Scalar(5, 4), Scalar(3, 4)}, {Scalar(13, 12), Scalar(5, 12)},
            {Scalar(5, 3), Scalar(4, 3)}, {Scalar(25, 24), Scalar(7, 24)}};
        auto& c = hyper[size_t(k) % hyper.size()];
        return {Scalar(s) * c.first, Scalar(s) * c.second, Scalar(0)};
    };
    e.admissible = [](const ParamMap& p) -> std::optional<std::string> {
        detail::sign_at(p, "eps");
        detail::sign_at(p, "s");
        detail::at(p, "km");
        detail::at(p, "kx");
        return std::nullopt;
    };
    e.generate = [unit_field](const ParamMap& p) {
        int eps = detail::sign_at(p, "eps");
        int s = detail::sign_at(p, "s");
        long km = detail::at(p, "km").rat().get_num().get_si();
        long kx = detail::at(p, "kx").rat().get_num().get_si();
        LieAlgebra L(3);
        PseudoMetric g = PseudoMetric::diagonal({Scalar(1), Scalar(eps), Scalar(eps)});
        auto Xm = unit_field(eps, km, 1);
        auto Xp = unit_field(eps, kx, s);
        ComponentsOdd c = detail::dim3_components(g, Xm, Xp, 1, 1);
        return build_instance(BnAlgebroid::untwisted(L), g, c);
    };
    for (int eps : {1, -1})
        for (long km = 0; km < 5; ++km)
            for (int s : {1, -1})
                e.samples.push_back(
                    {{"eps", Scalar(eps)}, {"km", Scalar(km)}, {"kx", Scalar(km)}, {"s", Scalar(s)}});
    for (long km = 0; km < 4; ++km)  // independent X+ and X- directions
        e.samples.push_back(
            {{"eps", Scalar(1)}, {"km", Scalar(km)}, {"kx", Scalar(km + 1)}, {"s", Scalar(1)}});
    return e;
}

inline CatalogEntry entry_dim3_rxsol2() {
    CatalogEntry e;
    e.name = "dim3-rxsol2";
    e.parity = "odd";
    e.description =
        "Non-unimodular dim-3 family on R + sol2: [w1,w2] = w2, g = diag(eps/delta^2, eps, 1), "
        "X- = w3, X+ = s w3, H = F = 0. Requires the two metric signs equal (eps = eps') so the "
        "orthogonal plane of X- is definite.";
    e.slots = {"delta", "eps", "s"};
    e.admissible = [](const ParamMap& p) -> std::optional<std::string> {
        if (detail::at(p, "delta").is_zero()) return "delta must be nonzero";
        detail::sign_at(p, "eps");
        detail::sign_at(p, "s");
        return std::nullopt;
    };
    e.generate = [](const ParamMap& p) {
        Scalar d = detail::at(p, "delta");
        int eps = detail::sign_at(p, "eps");
        int s = detail::sign_at(p, "s");
        LieAlgebra L(3);
        L.set_bracket(0, 1, 1, Scalar(1));
        PseudoMetric g = PseudoMetric::diagonal({Scalar(eps) / (d * d), Scalar(eps), Scalar(1)});
        std::vector<Scalar> Xm = {Scalar(0), Scalar(0), Scalar(1)};
        std::vector<Scalar> Xp = {Scalar(0), Scalar(0), Scalar(s)};
        ComponentsOdd c = detail::dim3_components(g, Xm, Xp, 1, 1);
        return build_instance(BnAlgebroid::untwisted(L), g, c);
    };
    for (auto& d : {Scalar(1), Scalar(3), Scalar(-2), Scalar(1, 2), Scalar(5, 3), Scalar(2, 7),
                    Scalar(-4, 3), Scalar(7), Scalar(9, 5), Scalar(-1, 5)})
        for (int eps : {1, -1})
            e.samples.push_back({{"delta", d}, {"eps", Scalar(eps)}, {"s", Scalar(eps)}});
    return e;
}

inline CatalogEntry entry_dim4_adapted() {
    CatalogEntry e;
    e.name = "dim4-adapted";
    e.parity = "even";
    e.description =
        "Adapted dim-4 family (basis u,e1,e2,e3): [e1,e2] = eps23 lam e3, [e3,e1] = eps23 lam e2, "
        "[u,e2] = beta e3, [u,e3] = -beta e2, g = diag(eps1, eps1, eps23, eps23), X+ = a u + b e1, "
        "X- = at u + bt e1, c+ with eps1(a^2+b^2) = eps1(at^2+bt^2) = 1 - c+^2, a at + b bt = 0, "
        "J- (u->e1, e2->e3), J+ the c+-rotation of (X+,X-) plus a complex structure on span{e2,e3}. "
        "H = F = 0.";
    e.slots = {"lambda", "beta", "eps1", "eps23", "a", "b", "at", "bt", "c_plus", "sigma"};
    e.admissible = [](const ParamMap& p) -> std::optional<std::string> {
        if (detail::at(p, "lambda").is_zero()) return "lambda must be nonzero (g0 non-abelian)";
        int eps1 = detail::sign_at(p, "eps1");
        detail::sign_at(p, "eps23");
        detail::sign_at(p, "sigma");
        Scalar cp = detail::at(p, "c_plus");
        if (cp.is_zero() || cp * cp == Scalar(1)) return "c+ must avoid {-1, 0, 1}";
        Scalar want = Scalar(1) - cp * cp;
        Scalar a = detail::at(p, "a"), b = detail::at(p, "b");
        Scalar at_ = detail::at(p, "at"), bt = detail::at(p, "bt");
        if (a.is_zero() && b.is_zero()) return "X+ must be nonzero";
        if (at_.is_zero() && bt.is_zero()) return "X- must be nonzero";
        if (Scalar(eps1) * (a * a + b * b) != want)
            return "norm constraint eps1(a^2+b^2) = 1-c+^2 fails";
        if (Scalar(eps1) * (at_ * at_ + bt * bt) != want)
            return "norm constraint eps1(at^2+bt^2) = 1-c+^2 fails";
        if (!(a * at_ + b * bt).is_zero()) return "orthogonality a at + b bt = 0 fails";
        return std::nullopt;
    };
    e.generate = [](const ParamMap& p) {
        Scalar lam = detail::at(p, "lambda");
        Scalar beta = detail::at(p, "beta");
        int eps1 = detail::sign_at(p, "eps1");
        int eps23 = detail::sign_at(p, "eps23");
        int sigma = detail::sign_at(p, "sigma");
        Scalar a = detail::at(p, "a"), b = detail::at(p, "b");
        Scalar at_ = detail::at(p, "at"), bt = detail::at(p, "bt");
        Scalar cp = detail::at(p, "c_plus");
        LieAlgebra L(4);  // basis u, e1, e2, e3 = indices 0..3
        L.set_bracket(1, 2, 3, Scalar(eps23) * lam);
        L.set_bracket(3, 1, 2, Scalar(eps23) * lam);
        L.set_bracket(0, 2, 3, beta);
        L.set_bracket(0, 3, 2, -beta);
        PseudoMetric g =
            PseudoMetric::diagonal({Scalar(eps1), Scalar(eps1), Scalar(eps23), Scalar(eps23)});
        RMatrix Jm(4, 4);
        Jm(1, 0) = Scalar(1);   // J- u = e1
        Jm(0, 1) = Scalar(-1);  // J- e1 = -u
        Jm(3, 2) = Scalar(1);   // J- e2 = e3
        Jm(2, 3) = Scalar(-1);
        std::vector<Scalar> Xp = {a, b, Scalar(0), Scalar(0)};
        std::vector<Scalar> Xm = {at_, bt, Scalar(0), Scalar(0)};
        // J+ on span{u,e1} from J+X+ = -c+X-, J+X- = c+X+
        RMatrix plane(2, 2), target(2, 2);
        plane(0, 0) = a;
        plane(1, 0) = b;
        plane(0, 1) = at_;
        plane(1, 1) = bt;
        target(0, 0) = -cp * at_;
        target(1, 0) = -cp * bt;
        target(0, 1) = cp * a;
        target(1, 1) = cp * b;
        RMatrix jp2 = target * plane.inverse();
        RMatrix Jp(4, 4);
        for (size_t i = 0; i < 2; ++i)
            for (size_t j = 0; j < 2; ++j) Jp(i, j) = jp2(i, j);
        Jp(3, 2) = Scalar(sigma);
        Jp(2, 3) = Scalar(-sigma);
        ComponentsEven c{g.matrix(), Jp, Jm, Xp, Xm, cp};
        return build_instance(BnAlgebroid::untwisted(L), g, c);
    };
    // rational circle points: (a, b) with a^2 + b^2 = 1 - c+^2
    struct Pt {
        Scalar cp, a, b, at_, bt;
    };
    std::vector<Pt> pos = {
        {Scalar(4, 5), Scalar(3, 5), Scalar(0), Scalar(0), Scalar(3, 5)},
        {Scalar(4, 5), Scalar(0), Scalar(3, 5), Scalar(3, 5), Scalar(0)},
        {Scalar(4, 5), Scalar(9, 25), Scalar(12, 25), Scalar(-12, 25), Scalar(9, 25)},
        {Scalar(3, 5), Scalar(4, 5), Scalar(0), Scalar(0), Scalar(4, 5)},
        {Scalar(3, 5), Scalar(12, 25), Scalar(16, 25), Scalar(16, 25), Scalar(-12, 25)},
        {Scalar(12, 13), Scalar(5, 13), Scalar(0), Scalar(0), Scalar(5, 13)},
        {Scalar(12, 13), Scalar(3, 13), Scalar(4, 13), Scalar(-4, 13), Scalar(3, 13)},
    };
    std::vector<Pt> neg = {
        {Scalar(5, 4), Scalar(3, 4), Scalar(0), Scalar(0), Scalar(3, 4)},
        {Scalar(5, 3), Scalar(4, 3), Scalar(0), Scalar(0), Scalar(-4, 3)},
        {Scalar(13, 12), Scalar(0), Scalar(5, 12), Scalar(5, 12), Scalar(0)},
    };
    for (auto& lam : {Scalar(1), Scalar(2), Scalar(-1, 2)})
        for (auto& beta : {Scalar(0), Scalar(1), Scalar(-3, 2)}) {
            for (auto& pt : pos)
                e.samples.push_back({{"lambda", lam},
                                     {"beta", beta},
                                     {"eps1", Scalar(1)},
                                     {"eps23", Scalar(1)},
                                     {"a", pt.a},
                                     {"b", pt.b},
                                     {"at", pt.at_},
                                     {"bt", pt.bt},
                                     {"c_plus", pt.cp},
                                     {"sigma", Scalar(1)}});
            for (auto& pt : neg)
                e.samples.push_back({{"lambda", lam},
                                     {"beta", beta},
                                     {"eps1", Scalar(-1)},
                                     {"eps23", Scalar(-1)},
                                     {"a", pt.a},
                                     {"b", pt.b},
                                     {"at", pt.at_},
                                     {"bt", pt.bt},
                                     {"c_plus", pt.cp},
                                     {"sigma", Scalar(1)}});
        }
    return e;
}

inline std::vector<CatalogEntry> catalog() {
    return {entry_dim2_abelian(), entry_dim3_iso2(),   entry_dim3_iso11(),
            entry_dim3_abelian(), entry_dim3_rxsol2(), entry_dim4_adapted()};
}

inline const CatalogEntry& catalog_entry(const std::vector<CatalogEntry>& cat, const std::string& name) {
    for (auto& e : cat)
        if (e.name == name) return e;
    throw std::invalid_argument("unknown catalog entry '" + name + "'");
}

/// Generates the instance at `params` and runs both integrability routes.
inline Report verify_entry(const CatalogEntry& e, const ParamMap& params) {
    if (auto err = e.admissible(params)) throw std::invalid_argument(e.name + ": " + *err);
    Instance inst = e.generate(params);
    return check_both(inst);
}

}  // namespace bnck
