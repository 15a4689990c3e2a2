#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bnck/cli.hpp"
#include "support/corpus.hpp"

using namespace bnck;

namespace {
json minimal_doc() {
    return json::parse(R"({
        "lie_algebra": {"dim": 2, "brackets": []},
        "metric": [["1", "0"], ["0", "1"]]
    })");
}

json iso2_doc() {
    Instance inst = corpus::model_odd_dim3(0);
    return instance_json(inst);
}

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const json& j, const char* name) {
        path = std::filesystem::temp_directory_path() / name;
        std::ofstream f(path);
        f << j.dump(2);
    }
    ~TempFile() { std::filesystem::remove(path); }
};

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
    std::ostringstream out, err;
    int rc = cli::run(std::move(args), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return rc;
}
}  // namespace

TEST_CASE("parse: minimal abelian document") {
    InputDocument doc = parse_document(minimal_doc());
    CHECK(doc.algebra.dim() == 2);
    CHECK(doc.algebra.is_abelian());
    CHECK(doc.H.is_zero());
    CHECK(doc.F.is_zero());
    REQUIRE(doc.metric.has_value());
}

TEST_CASE("parse: antisymmetry normalization vs strict rejection") {
    json j = minimal_doc();
    j["lie_algebra"]["dim"] = 3;
    j["lie_algebra"]["brackets"] = json::array(
        {{{"i", 1}, {"j", 2}, {"k", 3}, {"c", "1"}}, {{"i", 2}, {"j", 1}, {"k", 3}, {"c", "0"}}});
    j["metric"] = json::parse(R"([["1","0","0"],["0","1","0"],["0","0","1"]])");
    // lenient mode antisymmetrizes: c[1][2][3] = (1 - 0)/2 = 1/2
    InputDocument doc = parse_document(j, false);
    CHECK(doc.algebra.c(0, 1, 2) == Scalar(1, 2));
    CHECK(doc.algebra.c(1, 0, 2) == Scalar(-1, 2));
    // strict mode rejects
    CHECK_THROWS_WITH(parse_document(j, true), Catch::Matchers::ContainsSubstring("mirror"));
}

TEST_CASE("parse: twist and Jacobi violations carry precise diagnostics") {
    json j = minimal_doc();
    j["lie_algebra"]["dim"] = 4;
    j["metric"] =
        json::parse(R"([["1","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1"]])");
    j["F"] = json::array({{{"i", 1}, {"j", 2}, {"c", "1"}}, {{"i", 3}, {"j", 4}, {"c", "1"}}});
    CHECK_THROWS_WITH(parse_document(j), Catch::Matchers::ContainsSubstring("dH = -F^F"));

    json bad = minimal_doc();
    bad["lie_algebra"]["dim"] = 3;
    bad["lie_algebra"]["brackets"] = json::array(
        {{{"i", 1}, {"j", 2}, {"k", 1}, {"c", "1"}}, {{"i", 1}, {"j", 3}, {"k", 2}, {"c", "1"}}});
    CHECK_THROWS_WITH(parse_document(bad), Catch::Matchers::ContainsSubstring("Jacobi"));

    json oob = minimal_doc();
    oob["lie_algebra"]["brackets"] = json::array({{{"i", 1}, {"j", 5}, {"k", 1}, {"c", "1"}}});
    CHECK_THROWS_WITH(parse_document(oob), Catch::Matchers::ContainsSubstring("out of range"));
}

TEST_CASE("parse: structure block round trip on catalog exports") {
    for (auto& e : catalog()) {
        size_t count = 0;
        for (auto& p : e.samples) {
            if (count++ >= 8) break;
            Instance inst = e.generate(p);
            json doc = instance_json(inst);
            InputDocument parsed = parse_document(doc);
            REQUIRE(parsed.structure.has_value());
            Instance round = parsed.instance();
            CHECK(round.acs.matrix() == inst.acs.matrix());
            CHECK(round.A.H() == inst.A.H());
            CHECK(round.A.F() == inst.A.F());
            // serialize(parse(serialize(x))) == serialize(x), bit for bit
            CHECK(instance_json(round) == doc);
        }
    }
}

TEST_CASE("parse: component invariant violations are rejected") {
    json doc = iso2_doc();
    doc["structure"]["X_minus"] = json::array({"0", "2", "0"});  // breaks g(X-,X-) = 1
    CHECK_THROWS_WITH(parse_document(doc), Catch::Matchers::ContainsSubstring("invariant"));
}

TEST_CASE("cli: check-axioms") {
    TempFile f(iso2_doc(), "bnck_axioms.json");
    std::string out;
    CHECK(run_cli({"check-axioms", f.path.string()}, &out) == cli::kPass);
    CHECK(out.find("verdict: pass") != std::string::npos);
    std::string jout;
    CHECK(run_cli({"--json", "check-axioms", f.path.string()}, &jout) == cli::kPass);
    json rep = json::parse(jout);
    CHECK(rep["verdict"] == "pass");
    CHECK(rep["checks"].size() >= 4);
}

TEST_CASE("cli: check-kahler via all routes, exit codes") {
    TempFile good(iso2_doc(), "bnck_good.json");
    for (const char* via : {"direct", "components", "both"}) {
        std::string out;
        CHECK(run_cli({"check-kahler", good.path.string(), "--via", via}, &out) == cli::kPass);
    }
    // a corrupted instance fails with exit code 1
    auto corr = corpus::corruptions_odd_dim3();
    REQUIRE_FALSE(corr.empty());
    TempFile bad(instance_json(corr[0].inst), "bnck_bad.json");
    std::string out;
    CHECK(run_cli({"check-kahler", bad.path.string(), "--via", "both"}, &out) == cli::kFail);
    // a malformed document exits 2
    TempFile broken(json{{"lie_algebra", json{{"dim", 0}}}}, "bnck_broken.json");
    std::string err;
    CHECK(run_cli({"check-kahler", broken.path.string()}, nullptr, &err) == cli::kError);
    CHECK(run_cli({"check-kahler", "/nonexistent.json"}, nullptr, &err) == cli::kError);
    CHECK(run_cli({"frobnicate"}, nullptr, &err) == cli::kError);
}

TEST_CASE("cli: levi-civita table") {
    json j = minimal_doc();
    j["lie_algebra"]["dim"] = 3;
    j["lie_algebra"]["brackets"] =
        json::array({{{"i", 1}, {"j", 2}, {"k", 3}, {"c", "1"}},
                     {{"i", 2}, {"j", 3}, {"k", 1}, {"c", "1"}}});
    j["metric"] = json::parse(R"([["1","0","0"],["0","1","0"],["0","0","1"]])");
    TempFile f(j, "bnck_lc.json");
    std::string out;
    CHECK(run_cli({"levi-civita", f.path.string()}, &out) == cli::kPass);
    CHECK(out.find("nabla_{e2} e1 = -1 e3") != std::string::npos);
}

TEST_CASE("cli: rescale") {
    TempFile odd(iso2_doc(), "bnck_resc_odd.json");
    std::string out;
    CHECK(run_cli({"rescale", odd.path.string(), "--lambda", "2"}, &out) == cli::kPass);
    json scaled = json::parse(out.substr(0, out.rfind('}') + 1));
    CHECK(scaled["report"]["verdict"] == "pass");
    CHECK(scaled["metric"][1][1] == "4");  // lambda^2 g

    TempFile even(instance_json(corpus::model_even_dim2()), "bnck_resc_even.json");
    CHECK(run_cli({"rescale", even.path.string(), "--to-unit"}, &out) == cli::kPass);
    json unit = json::parse(out.substr(0, out.rfind('}') + 1));
    CHECK(unit["structure"]["c_plus"] == "0");
    // parity/flag mismatches exit 2
    CHECK(run_cli({"rescale", odd.path.string(), "--to-unit"}) == cli::kError);
    CHECK(run_cli({"rescale", even.path.string(), "--lambda", "2"}) == cli::kError);
}

TEST_CASE("cli: catalog verify and export round trip") {
    std::string out;
    CHECK(run_cli({"catalog"}, &out) == cli::kPass);
    CHECK(out.find("dim4-adapted") != std::string::npos);

    auto dir = std::filesystem::temp_directory_path() / "bnck_export";
    std::filesystem::remove_all(dir);
    CHECK(run_cli({"catalog", "--export", dir.string()}, &out) == cli::kPass);
    size_t checked = 0;
    for (auto& entry : std::filesystem::directory_iterator(dir)) {
        if (checked++ >= 5) break;
        std::ifstream f(entry.path());
        json doc;
        f >> doc;
        InputDocument parsed = parse_document(doc);
        CHECK(instance_json(parsed.instance()) == doc);
    }
    CHECK(checked >= 5);
    std::filesystem::remove_all(dir);
}

TEST_CASE("cli: search dim4-adapted reproduces the table") {
    std::string out;
    CHECK(run_cli({"--json", "search", "dim4-adapted"}, &out) == cli::kPass);
    json j = json::parse(out);
    CHECK(j.size() >= 80);
    for (auto& rec : j) CHECK(rec["as_expected"] == true);
}

TEST_CASE("cli: search dim3-unimodular on a small grid") {
    std::string out;
    CHECK(run_cli({"--json", "search", "dim3-unimodular", "--grid", "0..1"}, &out) == cli::kPass);
    json j = json::parse(out);
    // solutions appear at the abelian point and at the (0,1,1)-pattern points
    CHECK(j.size() >= 3);
    for (auto& rec : j)
        for (auto& sol : rec["solutions"]) {
            CHECK(sol["H"].empty());
            CHECK(sol["F"].empty());
        }
}

TEST_CASE("environment overrides") {
    setenv("BNCK_TOL", "1e-6", 1);
    parse_document(minimal_doc());
    CHECK(numeric_tolerance() == 1e-6);
    unsetenv("BNCK_TOL");
    setenv("BNCK_MODE", "numeric", 1);
    InputDocument doc = parse_document(minimal_doc());
    CHECK(doc.numeric_mode);
    CHECK_FALSE(doc.metric->matrix()(0, 0).exact());
    unsetenv("BNCK_MODE");
    set_numeric_tolerance(1e-9);
}
