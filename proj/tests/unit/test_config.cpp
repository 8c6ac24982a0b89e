#include <doctest.h>

#include "pxlap/config.hpp"

using namespace pxlap;

namespace {

ConfigError error_of(const std::string& text) {
    try {
        parse_config(text, "t.yaml");
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("expected a ConfigError");
    return ConfigError("", 0, "", "");
}

}  // namespace

TEST_CASE("default configuration") {
    const ExperimentConfig c = load_config("default");
    CHECK(c.threads == 1);
    CHECK(c.seed == 0);
    CHECK(c.equivalence.problems.size() >= 3);
    CHECK(c.affine.exponents.size() == 5);
    CHECK(c.infconv.epsilons == std::vector<double>{0.1, 0.05, 0.025});
    CHECK(c.infconv.probe.epsilons.size() == 4);
    CHECK(c.fuzz.inequality_samples == 100000);
    CHECK(c.rado.band_factor == 2.0);
}

TEST_CASE("overrides keep unrelated defaults") {
    const ExperimentConfig c = parse_config("seed: 9\nweak_solver:\n  damping: 0.5\n");
    CHECK(c.seed == 9);
    CHECK(c.fuzz.seed == 9);
    CHECK(c.weak.damping == 0.5);
    CHECK(c.weak.picard_tol == default_config().weak.picard_tol);
}

TEST_CASE("json is accepted") {
    const ExperimentConfig c = parse_config(R"({"seed": 4, "infconv": {"epsilons": [0.2, 0.1]}})");
    CHECK(c.seed == 4);
    CHECK(c.infconv.epsilons == std::vector<double>{0.2, 0.1});
}

TEST_CASE("errors name the line and field") {
    auto e = error_of("weak_solver:\n  damping: 0.7\n  bogus: 1\n");
    CHECK(e.line() == 3);
    CHECK(e.field() == "weak_solver.bogus");
    CHECK(std::string(e.what()) == "t.yaml:3: field 'weak_solver.bogus': unknown field");

    e = error_of("equivalence:\n  problems:\n    - name: x\n      grids: [32, 16]\n");
    CHECK(e.line() == 4);
    CHECK(e.field() == "equivalence.problems[0].grids");

    e = error_of("infconv:\n  epsilons: [0.1, 0.2]\n");
    CHECK(e.line() == 2);
    CHECK(e.field() == "infconv.epsilons");

    e = error_of("threads: many\n");
    CHECK(e.line() == 1);
    CHECK(e.field() == "threads");

    e = error_of("weak_solver: [1, 2\n");
    CHECK(e.line() >= 1);
}

TEST_CASE("config echo omits the output directory") {
    ExperimentConfig c = default_config();
    c.output = "/somewhere/else";
    const std::string j = c.to_json().dump();
    CHECK(j.find("somewhere") == std::string::npos);
    CHECK(c.to_json() == default_config().to_json());
}
