#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bnck/bnck.hpp"

namespace bnck::cli {

// exit codes: 0 = verdict pass, 1 = verdict fail, 2 = input/usage error
constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kError = 2;

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("JSON parse error in '" + path + "': " + e.what());
    }
    return j;
}

inline int emit_report(const Report& rep, bool as_json, std::ostream& out) {
    if (as_json)
        out << report_json(rep).dump(2) << "\n";
    else
        out << report_table(rep);
    return rep.pass() ? kPass : kFail;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"verification and classification toolkit for Courant algebroids of type Bn"};
    app.require_subcommand(1);
    bool as_json = false, strict = false;
    app.add_flag("--json", as_json, "machine-readable report output");
    app.add_flag("--strict", strict, "reject non-normalized antisymmetry instead of normalizing");

    std::string file;
    auto* axioms = app.add_subcommand("check-axioms", "verify the Courant axioms of a twisted algebroid");
    axioms->add_option("file", file, "input document")->required();

    std::string via = "both";
    auto* kahler = app.add_subcommand("check-kahler", "decide pseudo-Kahler integrability");
    kahler->add_option("file", file, "input document")->required();
    kahler->add_option("--via", via, "direct | components | both (default both)")
        ->check(CLI::IsMember({"direct", "components", "both"}));

    bool verify = false;
    std::string export_dir;
    auto* cat = app.add_subcommand("catalog", "list, verify or export the example families");
    cat->add_flag("--verify", verify, "verify every sample point of every family");
    cat->add_option("--export", export_dir, "write one document per sample point into this directory");

    std::string what, grid = "-2..2";
    auto* search = app.add_subcommand("search", "classification searches");
    search->add_option("what", what, "dim3-unimodular | dim4-adapted")->required();
    search->add_option("--grid", grid, "lambda range for dim3-unimodular, e.g. -2..2");

    auto* lc = app.add_subcommand("levi-civita", "print the Levi-Civita connection table");
    lc->add_option("file", file, "input document with lie_algebra and metric")->required();

    std::string lambda_str;
    bool to_unit = false;
    auto* resc = app.add_subcommand("rescale", "rescale a pseudo-Kahler structure");
    resc->add_option("file", file, "input document with a structure block")->required();
    resc->add_option("--lambda", lambda_str, "odd parity: rescaling factor p/q");
    resc->add_flag("--to-unit", to_unit, "even parity: rescale to c+ = 0");

    std::vector<const char*> argv;
    std::string prog = "bnck";
    argv.push_back(prog.c_str());
    for (auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse((int)argv.size(), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return kPass;
        }
        err << "usage error: " << e.what() << "\n";
        return kError;
    }

    try {
        if (*axioms) {
            InputDocument doc = parse_document(load_json(file), strict);
            Report rep = doc.algebroid().check_axioms();
            return emit_report(rep, as_json, out);
        }
        if (*kahler) {
            InputDocument doc = parse_document(load_json(file), strict);
            Instance inst = doc.instance();
            Report rep;
            if (via == "direct")
                rep = check_direct(inst.A, inst.gm, inst.acs);
            else if (via == "components")
                rep = check_components(inst);
            else
                rep = check_both(inst);
            return emit_report(rep, as_json, out);
        }
        if (*cat) {
            auto entries = catalog();
            int rc = kPass;
            json jout = json::array();
            for (auto& e : entries) {
                json je{{"name", e.name}, {"parity", e.parity}, {"description", e.description},
                        {"slots", e.slots}, {"samples", e.samples.size()}};
                if (verify) {
                    size_t pass = 0, fail = 0;
                    for (auto& p : e.samples) {
                        Report rep = verify_entry(e, p);
                        rep.pass() ? ++pass : ++fail;
                    }
                    if (e.samples.empty() && e.admissible(ParamMap{}))
                        je["verified"] = "empty family (no admissible parameters)";
                    else
                        je["verified"] = std::to_string(pass) + "/" + std::to_string(pass + fail);
                    if (fail) rc = kFail;
                    if (!as_json)
                        out << e.name << ": " << je["verified"].get<std::string>()
                            << (fail ? "  [FAIL]" : "") << "\n";
                } else if (!as_json) {
                    out << e.name << " (" << e.parity << ", " << e.samples.size() << " sample points)\n";
                }
                if (!export_dir.empty()) {
                    std::filesystem::create_directories(export_dir);
                    size_t k = 0;
                    json index = json::array();
                    for (auto& p : e.samples) {
                        Instance inst = e.generate(p);
                        json doc = instance_json(inst);
                        std::string name = e.name + "-" + std::to_string(k++) + ".json";
                        std::ofstream f(std::filesystem::path(export_dir) / name);
                        f << doc.dump(2) << "\n";
                        index.push_back(name);
                    }
                    je["exported"] = index;
                }
                jout.push_back(je);
            }
            if (as_json) out << jout.dump(2) << "\n";
            return rc;
        }
        if (*search) {
            if (what == "dim3-unimodular") {
                long lo = -2, hi = 2;
                auto dots = grid.find("..");
                if (dots != std::string::npos) {
                    lo = std::stol(grid.substr(0, dots));
                    hi = std::stol(grid.substr(dots + 2));
                }
                json jout = json::array();
                size_t nonempty = 0;
                for (auto& cell : search_dim3_grid(lo, hi)) {
                    if (cell.solutions.empty()) continue;
                    ++nonempty;
                    json jp{{"lambda", {cell.lam[0], cell.lam[1], cell.lam[2]}},
                            {"eps", {cell.eps[0], cell.eps[1], cell.eps[2]}},
                            {"solutions", json::array()}};
                    for (auto& s : cell.solutions) {
                        json js{{"X_minus", vector_json(s.X_minus)},
                                {"X_plus", vector_json(s.X_plus)},
                                {"H", form_json(s.H, {"i", "j", "k"})},
                                {"F", form_json(s.F, {"i", "j"})}};
                        jp["solutions"].push_back(js);
                    }
                    jout.push_back(jp);
                    if (!as_json) {
                        out << "lambda=(" << cell.lam[0] << "," << cell.lam[1] << "," << cell.lam[2]
                            << ") eps=(" << cell.eps[0] << "," << cell.eps[1] << "," << cell.eps[2]
                            << "): " << cell.solutions.size() << " solution(s), all verified\n";
                    }
                }
                if (as_json)
                    out << jout.dump(2) << "\n";
                else
                    out << "grid points with solutions: " << nonempty << "\n";
                return kPass;
            }
            if (what == "dim4-adapted") {
                auto samples = dim4_class_samples();
                json jout = json::array();
                bool all_ok = true;
                for (auto& s : samples) {
                    Dim4ClassResult res = solve_classes_dim4(s.eps1, s.eps23, s.c_plus, s.pt);
                    bool ok = res.system_ok && res.class_id == s.expected_class &&
                              res.extendable == s.expected_extendable;
                    all_ok = all_ok && ok;
                    if (as_json) {
                        jout.push_back(json{{"expected_class", s.expected_class},
                                            {"class", res.class_id},
                                            {"extendable", res.extendable},
                                            {"as_expected", ok}});
                    } else {
                        out << "class " << res.class_id << (res.extendable ? " extendable" : "")
                            << (ok ? "" : "  [UNEXPECTED]") << "\n";
                    }
                }
                if (as_json) out << jout.dump(2) << "\n";
                return all_ok ? kPass : kFail;
            }
            err << "usage error: unknown search '" << what << "'\n";
            return kError;
        }
        if (*lc) {
            InputDocument doc = parse_document(load_json(file), strict);
            if (!doc.metric) throw ParseError("levi-civita: document needs a metric");
            Connection conn = levi_civita(doc.algebra, *doc.metric);
            size_t n = doc.algebra.dim();
            if (as_json) {
                json terms = json::array();
                for (size_t i = 0; i < n; ++i)
                    for (size_t j = 0; j < n; ++j)
                        for (size_t k = 0; k < n; ++k)
                            if (!conn.gamma(i, j, k).is_zero())
                                terms.push_back(json{{"i", i + 1},
                                                     {"j", j + 1},
                                                     {"k", k + 1},
                                                     {"c", conn.gamma(i, j, k).str()}});
                out << json{{"gamma", terms}}.dump(2) << "\n";
            } else {
                for (size_t i = 0; i < n; ++i)
                    for (size_t j = 0; j < n; ++j) {
                        std::string terms;
                        for (size_t k = 0; k < n; ++k)
                            if (!conn.gamma(i, j, k).is_zero()) {
                                if (!terms.empty()) terms += " + ";
                                terms += conn.gamma(i, j, k).str() + " e" + std::to_string(k + 1);
                            }
                        if (!terms.empty())
                            out << "nabla_{e" << i + 1 << "} e" << j + 1 << " = " << terms << "\n";
                    }
            }
            return kPass;
        }
        if (*resc) {
            InputDocument doc = parse_document(load_json(file), strict);
            Instance inst = doc.instance();
            Instance scaled = [&] {
                if (std::holds_alternative<ComponentsOdd>(inst.comps)) {
                    if (lambda_str.empty())
                        throw ParseError("rescale: odd parity needs --lambda");
                    return rescale_odd(inst, Scalar::parse(lambda_str));
                }
                if (!to_unit) throw ParseError("rescale: even parity needs --to-unit");
                return rescale_even_to_unit(inst);
            }();
            Report rep = check_both(scaled);
            json jout = instance_json(scaled);
            jout["report"] = report_json(rep);
            if (as_json)
                out << jout.dump(2) << "\n";
            else {
                out << jout.dump(2) << "\n";
                err << (rep.pass() ? "rescaled structure verifies\n" : "rescaled structure FAILS\n");
            }
            return rep.pass() ? kPass : kFail;
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }
    err << "usage error: no subcommand\n";
    return kError;
}

}  // namespace bnck::cli
