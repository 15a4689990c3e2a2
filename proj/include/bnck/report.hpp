#pragma once

#include <string>
#include <utility>
#include <vector>

namespace bnck {

struct Check {
    std::string label;
    bool ok = true;
    std::string witness;  // failing tuple / residual, empty on pass
};

/// Verdict plus the per-check trail; a report passes iff every check does.
struct Report {
    std::string method;  // "direct" | "components" | "both" | ""
    std::vector<Check> checks;

    bool pass() const {
        for (auto& c : checks)
            if (!c.ok) return false;
        return true;
    }
    void add(std::string label, bool ok, std::string witness = "") {
        checks.push_back({std::move(label), ok, std::move(witness)});
    }
    void merge(const Report& other, const std::string& prefix = "") {
        for (auto& c : other.checks) checks.push_back({prefix + c.label, c.ok, c.witness});
    }
    const Check* first_failure() const {
        for (auto& c : checks)
            if (!c.ok) return &c;
        return nullptr;
    }
    std::string summary() const {
        std::string s = pass() ? "pass" : "fail";
        if (!pass()) {
            s += " [" + first_failure()->label;
            if (!first_failure()->witness.empty()) s += " @ " + first_failure()->witness;
            s += "]";
        }
        return s;
    }
};

}  // namespace bnck
