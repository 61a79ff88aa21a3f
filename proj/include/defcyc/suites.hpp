#pragma once

#include "defcyc/aut.hpp"
#include "defcyc/eval.hpp"
#include "defcyc/report.hpp"

#include <string>
#include <vector>

namespace defcyc {

struct SuiteOptions {
    int max_order = 15;
    int jobs = 1;
    std::int64_t aut_budget = kDefaultAutNodeBudget;
    std::int64_t eval_budget = kDefaultEvalAtomBudget;
};

/// The verification suites behind `verify`: each one checks a structural
/// law exhaustively over the catalog or the fgabelian grids.
const std::vector<std::string>& suite_names();
bool is_suite_name(const std::string& name);

/// Runs a suite; budget exhaustion surfaces as skip records with a reason,
/// never silently. Cases may run in parallel (--jobs); records are merged
/// in canonical case order.
Report run_suite(const std::string& name, const SuiteOptions& opts = {});

} // namespace defcyc
