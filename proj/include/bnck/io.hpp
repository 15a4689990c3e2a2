#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bnck/courant.hpp"
#include "bnck/forms.hpp"
#include "bnck/integrability.hpp"
#include "bnck/liealg.hpp"
#include "bnck/report.hpp"
#include "bnck/structures.hpp"

namespace bnck {

using json = nlohmann::json;

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Parsed and validated input document.
struct InputDocument {
    LieAlgebra algebra{1};
    KForm H, F;
    std::optional<PseudoMetric> metric;
    std::optional<Components> structure;
    bool numeric_mode = false;
    double tolerance = 1e-9;

    BnAlgebroid algebroid() const { return BnAlgebroid(algebra, H, F); }
    Instance instance() const {
        if (!metric || !structure) throw ParseError("document has no structure block");
        return build_instance(algebroid(), *metric, *structure);
    }
};

namespace detail {

inline Scalar parse_scalar(const json& j, const std::string& path, bool numeric) {
    Scalar s;
    if (j.is_string())
        s = Scalar::parse(j.get<std::string>());
    else if (j.is_number_integer())
        s = Scalar((long)j.get<long long>());
    else if (j.is_number_float())
        s = Scalar::numeric(j.get<double>());
    else
        throw ParseError(path + ": expected a rational string or number");
    return numeric ? s.as_numeric() : s;
}

inline RMatrix parse_matrix(const json& j, const std::string& path, bool numeric) {
    if (!j.is_array() || j.empty()) throw ParseError(path + ": expected a non-empty array of rows");
    size_t rows = j.size(), cols = j[0].size();
    RMatrix m(rows, cols);
    for (size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw ParseError(path + ": ragged rows");
        for (size_t k = 0; k < cols; ++k)
            m(i, k) = parse_scalar(j[i][k], path + "[" + std::to_string(i) + "][" + std::to_string(k) + "]",
                                   numeric);
    }
    return m;
}

inline std::vector<Scalar> parse_vector(const json& j, const std::string& path, size_t n, bool numeric) {
    if (!j.is_array() || j.size() != n)
        throw ParseError(path + ": expected an array of " + std::to_string(n) + " entries");
    std::vector<Scalar> v(n);
    for (size_t i = 0; i < n; ++i) v[i] = parse_scalar(j[i], path + "[" + std::to_string(i) + "]", numeric);
    return v;
}

inline size_t parse_index(const json& j, const std::string& path, size_t n) {
    if (!j.is_number_integer()) throw ParseError(path + ": expected a 1-based integer index");
    long long v = j.get<long long>();
    if (v < 1 || (size_t)v > n) throw ParseError(path + ": index " + std::to_string(v) + " out of range 1.." +
                                                 std::to_string(n));
    return (size_t)v - 1;
}

/// Antisymmetry bookkeeping for loaded coefficient records.
struct SlotTable {
    // canonical sorted tuple -> list of sign-adjusted declared values
    std::map<std::vector<size_t>, std::vector<Scalar>> declared;

    void add(std::vector<size_t> idx, Scalar v, const std::string& path) {
        std::vector<size_t> sorted = idx;
        int s = detail::sort_sign(sorted);
        if (s == 0) throw ParseError(path + ": repeated index in an antisymmetric coefficient");
        declared[sorted].push_back(Scalar(s) * v);
    }
    /// strict: all declarations of a slot must agree; lenient: average them.
    void resolve(KForm& into, bool strict, const std::string& path) const {
        for (auto& [slot, vals] : declared) {
            Scalar v = vals[0];
            for (size_t i = 1; i < vals.size(); ++i) {
                if (strict && vals[i] != vals[0])
                    throw ParseError(path + ": conflicting coefficients violate antisymmetry (use lenient "
                                            "mode to antisymmetrize)");
                v += vals[i];
            }
            if (vals.size() > 1) v = v / Scalar((long)vals.size());
            into.set_term(slot, v);
        }
    }
};

}  // namespace detail

/// Parses and fully validates a document. Throws ParseError with the path of
/// the offending field.
inline InputDocument parse_document(const json& doc, bool strict = false) {
    InputDocument out;
    if (!doc.is_object()) throw ParseError("document: expected a JSON object");
    if (doc.contains("mode")) {
        std::string m = doc["mode"].get<std::string>();
        if (m == "numeric")
            out.numeric_mode = true;
        else if (m != "exact")
            throw ParseError("mode: expected \"exact\" or \"numeric\"");
    }
    if (const char* env = std::getenv("BNCK_MODE")) {
        std::string m = env;
        if (m == "numeric") out.numeric_mode = true;
        else if (m == "exact") out.numeric_mode = false;
        else if (!m.empty()) throw ParseError("BNCK_MODE: expected exact or numeric");
    }
    if (doc.contains("tolerance")) out.tolerance = doc["tolerance"].get<double>();
    if (const char* env = std::getenv("BNCK_TOL")) out.tolerance = std::stod(env);
    set_numeric_tolerance(out.tolerance);
    bool num = out.numeric_mode;

    if (!doc.contains("lie_algebra")) throw ParseError("lie_algebra: required field missing");
    const json& la = doc["lie_algebra"];
    if (!la.contains("dim")) throw ParseError("lie_algebra.dim: required field missing");
    size_t n = la["dim"].get<size_t>();
    if (n == 0 || n > 16) throw ParseError("lie_algebra.dim: expected 1..16");
    LieAlgebra L(n);
    if (la.contains("brackets")) {
        // declared[(i,j,k)] values; mirror consistency per the strict flag
        std::map<std::array<size_t, 3>, std::vector<Scalar>> raw;
        size_t rec = 0;
        for (const json& r : la["brackets"]) {
            std::string path = "lie_algebra.brackets[" + std::to_string(rec++) + "]";
            size_t i = detail::parse_index(r.at("i"), path + ".i", n);
            size_t j = detail::parse_index(r.at("j"), path + ".j", n);
            size_t k = detail::parse_index(r.at("k"), path + ".k", n);
            Scalar c = detail::parse_scalar(r.at("c"), path + ".c", num);
            if (i == j && !c.is_zero()) throw ParseError(path + ": [e_i, e_i] must vanish");
            raw[{i, j, k}].push_back(c);
        }
        for (auto& [slot, vals] : raw) {
            auto [i, j, k] = slot;
            for (size_t t = 1; t < vals.size(); ++t)
                if (strict && vals[t] != vals[0])
                    throw ParseError("lie_algebra.brackets: duplicate (i,j,k) records disagree");
            Scalar mine = vals[0];
            for (size_t t = 1; t < vals.size(); ++t) mine += vals[t];
            mine = mine / Scalar((long)vals.size());
            auto mirror = raw.find({j, i, k});
            if (mirror != raw.end()) {
                Scalar theirs = mirror->second[0];
                for (size_t t = 1; t < mirror->second.size(); ++t) theirs += mirror->second[t];
                theirs = theirs / Scalar((long)mirror->second.size());
                if (strict && theirs != -mine)
                    throw ParseError("lie_algebra.brackets: c[" + std::to_string(j + 1) + "][" +
                                     std::to_string(i + 1) + "][" + std::to_string(k + 1) +
                                     "] is not the negative of its mirror (strict mode)");
                mine = (mine - theirs) / Scalar(2);  // antisymmetrize
            }
            L.set_bracket(i, j, k, mine);
        }
    }
    Report jac = L.jacobi_check();
    if (!jac.pass())
        throw ParseError("lie_algebra.brackets: Jacobi identity fails at triple " +
                         jac.first_failure()->witness);
    out.algebra = L;

    out.H = KForm(n, 3);
    out.F = KForm(n, 2);
    if (doc.contains("H")) {
        detail::SlotTable table;
        size_t rec = 0;
        for (const json& r : doc["H"]) {
            std::string path = "H[" + std::to_string(rec++) + "]";
            table.add({detail::parse_index(r.at("i"), path + ".i", n),
                       detail::parse_index(r.at("j"), path + ".j", n),
                       detail::parse_index(r.at("k"), path + ".k", n)},
                      detail::parse_scalar(r.at("c"), path + ".c", num), path);
        }
        table.resolve(out.H, strict, "H");
    }
    if (doc.contains("F")) {
        detail::SlotTable table;
        size_t rec = 0;
        for (const json& r : doc["F"]) {
            std::string path = "F[" + std::to_string(rec++) + "]";
            table.add({detail::parse_index(r.at("i"), path + ".i", n),
                       detail::parse_index(r.at("j"), path + ".j", n)},
                      detail::parse_scalar(r.at("c"), path + ".c", num), path);
        }
        table.resolve(out.F, strict, "F");
    }
    if (!ce_differential(L, out.F).is_zero()) throw ParseError("F: not closed (dF != 0)");
    if (!(ce_differential(L, out.H) + wedge(out.F, out.F)).is_zero())
        throw ParseError("H: twist condition dH = -F^F fails");

    if (doc.contains("metric")) {
        RMatrix m = detail::parse_matrix(doc["metric"], "metric", num);
        if (m.rows() != n || m.cols() != n) throw ParseError("metric: expected " + std::to_string(n) + "x" +
                                                             std::to_string(n));
        try {
            out.metric.emplace(m);
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("metric: ") + e.what());
        }
    }

    if (doc.contains("structure")) {
        const json& st = doc["structure"];
        if (!out.metric) throw ParseError("structure: requires a top-level metric");
        std::string parity = st.at("parity").get<std::string>();
        if (parity != "odd" && parity != "even") throw ParseError("structure.parity: expected odd|even");
        if (st.contains("metric")) {
            RMatrix m = detail::parse_matrix(st["metric"], "structure.metric", num);
            if (m != out.metric->matrix())
                throw ParseError("structure.metric: differs from the top-level metric");
        }
        RMatrix Jp = detail::parse_matrix(st.at("J_plus"), "structure.J_plus", num);
        RMatrix Jm = detail::parse_matrix(st.at("J_minus"), "structure.J_minus", num);
        auto Xp = detail::parse_vector(st.at("X_plus"), "structure.X_plus", n, num);
        auto Xm = detail::parse_vector(st.at("X_minus"), "structure.X_minus", n, num);
        if (parity == "odd") {
            if ((n % 2) == 0) throw ParseError("structure.parity: odd structure on even-dimensional algebra");
            ComponentsOdd c{out.metric->matrix(), Jp, Jm, Xp, Xm};
            Report v = c.validate();
            if (!v.pass()) throw ParseError("structure: invariant failed: " + v.summary());
            out.structure = c;
        } else {
            if ((n % 2) == 1) throw ParseError("structure.parity: even structure on odd-dimensional algebra");
            if (!st.contains("c_plus")) throw ParseError("structure.c_plus: required for even parity");
            Scalar cp = detail::parse_scalar(st["c_plus"], "structure.c_plus", num);
            ComponentsEven c{out.metric->matrix(), Jp, Jm, Xp, Xm, cp};
            Report v = c.validate();
            if (!v.pass()) throw ParseError("structure: invariant failed: " + v.summary());
            out.structure = c;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

inline json scalar_json(const Scalar& s) { return s.str(); }

inline json matrix_json(const RMatrix& m) {
    json rows = json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline json vector_json(const std::vector<Scalar>& v) {
    json a = json::array();
    for (auto& s : v) a.push_back(scalar_json(s));
    return a;
}

inline json cscalar_json(const CScalar& s) { return json{{"re", s.re.str()}, {"im", s.im.str()}}; }

inline json form_json(const KForm& f, const std::vector<std::string>& keys) {
    json a = json::array();
    for (auto& [idx, c] : f.terms()) {
        json rec;
        for (size_t t = 0; t < idx.size(); ++t) rec[keys[t]] = idx[t] + 1;
        rec["c"] = scalar_json(c);
        a.push_back(rec);
    }
    return a;
}

inline json algebra_json(const LieAlgebra& L) {
    json brackets = json::array();
    for (size_t i = 0; i < L.dim(); ++i)
        for (size_t j = i + 1; j < L.dim(); ++j)
            for (size_t k = 0; k < L.dim(); ++k)
                if (!L.c(i, j, k).is_zero())
                    brackets.push_back(
                        json{{"i", i + 1}, {"j", j + 1}, {"k", k + 1}, {"c", scalar_json(L.c(i, j, k))}});
    return json{{"dim", L.dim()}, {"brackets", brackets}};
}

inline json components_json(const Components& comps) {
    json st;
    if (auto odd = std::get_if<ComponentsOdd>(&comps)) {
        st["parity"] = "odd";
        st["J_plus"] = matrix_json(odd->J_plus);
        st["J_minus"] = matrix_json(odd->J_minus);
        st["X_plus"] = vector_json(odd->X_plus);
        st["X_minus"] = vector_json(odd->X_minus);
    } else {
        auto& even = std::get<ComponentsEven>(comps);
        st["parity"] = "even";
        st["J_plus"] = matrix_json(even.J_plus);
        st["J_minus"] = matrix_json(even.J_minus);
        st["X_plus"] = vector_json(even.X_plus);
        st["X_minus"] = vector_json(even.X_minus);
        st["c_plus"] = scalar_json(even.c_plus);
    }
    return st;
}

inline json instance_json(const Instance& inst) {
    json doc;
    doc["lie_algebra"] = algebra_json(inst.A.algebra());
    json H = form_json(inst.A.H(), {"i", "j", "k"});
    json F = form_json(inst.A.F(), {"i", "j"});
    if (!H.empty()) doc["H"] = H;
    if (!F.empty()) doc["F"] = F;
    doc["metric"] = matrix_json(inst.gm.metric().matrix());
    doc["structure"] = components_json(inst.comps);
    return doc;
}

inline json report_json(const Report& rep) {
    json checks = json::array();
    for (auto& c : rep.checks) {
        json e{{"label", c.label}, {"status", c.ok ? "pass" : "fail"}};
        e["witness"] = c.witness;
        checks.push_back(e);
    }
    return json{{"verdict", rep.pass() ? "pass" : "fail"}, {"method", rep.method}, {"checks", checks}};
}

inline std::string report_table(const Report& rep) {
    std::string s;
    for (auto& c : rep.checks) {
        s += c.ok ? "[ pass ] " : "[ FAIL ] ";
        s += c.label;
        if (!c.ok && !c.witness.empty()) s += "  <- " + c.witness;
        s += "\n";
    }
    s += rep.pass() ? "verdict: pass\n" : "verdict: fail\n";
    return s;
}

}  // namespace bnck
