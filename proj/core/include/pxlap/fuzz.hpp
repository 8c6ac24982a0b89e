#pragma once

// Randomized campaigns over the pointwise inequalities and identities of
// operators.hpp. Every check records its sample count, the worst normalized
// violation and the offending samples verbatim so a failure can be replayed.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace pxlap {

using Json = nlohmann::ordered_json;

struct FuzzCheck {
    std::string name;
    std::string statement;
    std::size_t samples = 0;
    std::size_t violations = 0;
    /// max over samples of (lhs - rhs) / scale for "lhs <= rhs" checks;
    /// negative when every sample holds with room to spare.
    double worst_violation = -1e300;
    Json worst_sample;
    /// First few violating samples, verbatim.
    std::vector<Json> failing_samples;
    /// Diagnostic checks are reported but do not decide pass/fail.
    bool diagnostic = false;

    bool passed() const { return violations == 0; }
    void record(double normalized_excess, const Json& sample);
};

struct FuzzOptions {
    std::uint64_t seed = 0;
    std::size_t inequality_samples = 100000;
    std::size_t identity_samples = 10000;
    double tolerance = 1e-12;
};

struct FuzzReport {
    std::uint64_t seed = 0;
    std::vector<FuzzCheck> checks;

    bool passed() const;
    const FuzzCheck* find(const std::string& name) const;
    Json to_json() const;
};

FuzzReport run_inequality_fuzz(const FuzzOptions& options);

}  // namespace pxlap
