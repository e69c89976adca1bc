#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arbre/tree_subst.hpp"

namespace arbre {

struct VerifyConfig {
    int d = 3;
    int max_stage = 10;
    std::size_t prefix_len = 1000000;
    double tol = 1e-3;
};

struct CheckResult {
    std::string suite;
    std::string property;
    bool passed = true;
    std::size_t checked = 0;
    std::vector<std::string> witnesses;
};

inline const std::vector<std::string> kSuites = {"words", "trees", "realization", "core"};

// suite is one of kSuites or "all"; throws std::invalid_argument otherwise.
std::vector<CheckResult> run_suite(const std::string& suite, const VerifyConfig& cfg);

// Validation and discernment of iterates of single edges for caller-supplied rules.
std::vector<CheckResult> run_rules(const TreeSubstitution& ts, int max_stage);

nlohmann::json report_json(const std::string& suite, const VerifyConfig& cfg, const std::vector<CheckResult>& checks);

// Spectral comparisons used by the trees suite; eigenvalues matched as multisets within tol.
bool spectrum_contains(const IntMatrix& big, const IntMatrix& small, int zeros, double tol);
bool spectrum_extends(const IntMatrix& big, const IntMatrix& small, int unimodular, double tol);

}  // namespace arbre
