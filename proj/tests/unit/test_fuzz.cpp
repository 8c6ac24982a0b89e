#include <doctest.h>

#include "pxlap/fuzz.hpp"

using namespace pxlap;

TEST_CASE("fuzz campaign is reproducible and only the printed constant fails") {
    FuzzOptions o;
    o.seed = 0;
    o.inequality_samples = 20000;
    o.identity_samples = 2000;
    const FuzzReport a = run_inequality_fuzz(o);
    const FuzzReport b = run_inequality_fuzz(o);
    CHECK(a.to_json().dump() == b.to_json().dump());
    for (const auto& c : a.checks) {
        INFO(c.name);
        if (c.name == "continuity_upper_bound_p_from_2") {
            CHECK(c.violations > 0);
            CHECK_FALSE(c.failing_samples.empty());
        } else if (!c.diagnostic) {
            CHECK(c.violations == 0);
        }
    }
    REQUIRE(a.find("degenerate_equal_vectors"));
    CHECK(a.find("degenerate_equal_vectors")->worst_violation <= 0.0);
    CHECK(a.find("p_equals_2_equality")->passed());
}

TEST_CASE("different seeds draw different samples") {
    FuzzOptions o;
    o.inequality_samples = 2000;
    o.identity_samples = 200;
    o.seed = 1;
    const auto a = run_inequality_fuzz(o).to_json().dump();
    o.seed = 2;
    CHECK(a != run_inequality_fuzz(o).to_json().dump());
}
