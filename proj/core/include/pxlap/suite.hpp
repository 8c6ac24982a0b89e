#pragma once

// The acceptance criteria as runnable checks. Each criterion returns a
// verdict and a JSON details block; timings are kept beside the verdict and
// never enter suite_json(), so verify reports are byte-stable.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pxlap/experiments.hpp"

namespace pxlap {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    /// A solver threw; the criterion is failed and `details.error` says why.
    bool solver_failure = false;
    Json details;
    std::string summary;
    double seconds = 0.0;
    /// Per-case wall times, for criteria that carry a per-case budget.
    std::vector<std::pair<std::string, double>> case_seconds;
};

inline constexpr int kCriterionCount = 8;

const std::string& criterion_name(int id);

/// Wall-clock budget of a criterion (whole criterion or per case, see
/// budget_is_per_case); 0 means none.
double criterion_budget(int id);
bool budget_is_per_case(int id);

EquivalenceTolerances suite_equivalence_tolerances();

class Suite {
public:
    explicit Suite(ExperimentConfig cfg, SolutionSink sink = {});

    /// id in 1..kCriterionCount.
    CriterionResult run(int id);
    std::vector<CriterionResult> run_all();

    const ExperimentConfig& config() const { return cfg_; }

private:
    CriterionResult affine();
    CriterionResult manufactured();
    CriterionResult equivalence();
    CriterionResult infconv();
    CriterionResult defect();
    CriterionResult fuzz();
    CriterionResult varexp();
    CriterionResult rado();

    const EquivalenceReport& equivalence_for(const ProblemSpec& problem, double* seconds);

    ExperimentConfig cfg_;
    SolutionSink sink_;
    std::map<std::string, std::pair<EquivalenceReport, double>> equivalence_cache_;
};

/// Report of a suite run: config, per-criterion verdicts and details.
Json suite_json(const ExperimentConfig& cfg, const std::vector<CriterionResult>& results);

}  // namespace pxlap
