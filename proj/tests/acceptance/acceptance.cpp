// Acceptance run: one PASS/FAIL line per criterion. Tolerances live in
// pxlap/tolerances.hpp; runtime budgets are checked here because timings are
// kept out of the reports.
//
//   pxlap_acceptance [--criterion N]... [--pxlab PATH] [--work DIR]

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "pxlap/suite.hpp"
#include "pxlap/tolerances.hpp"

namespace fs = std::filesystem;
using namespace pxlap;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f s", s);
    return buf;
}

// Budget check; returns a note when exceeded.
std::string over_budget(const CriterionResult& r) {
    const double budget = criterion_budget(r.id);
    if (budget <= 0.0) return {};
    if (budget_is_per_case(r.id)) {
        for (const auto& [name, s] : r.case_seconds) {
            if (s > budget) return name + " took " + seconds(s) + " > " + seconds(budget);
        }
        return {};
    }
    if (r.seconds > budget) return "took " + seconds(r.seconds) + " > " + seconds(budget);
    return {};
}

bool reproducibility(const std::string& pxlab, const fs::path& work) {
    std::string report[2];
    for (int i = 0; i < 2; ++i) {
        const fs::path out = work / ("verify_" + std::to_string(i));
        fs::remove_all(out);
        const std::string cmd = "\"" + pxlab + "\" verify --config default --seed 0 --threads 1 --out \"" +
                                out.string() + "\" > \"" + (work / ("verify_" + std::to_string(i) + ".log")).string() +
                                "\" 2>&1";
        const int status = std::system(cmd.c_str());
        const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        if (code != 0 && code != 1) {
            std::cout << "FAIL [9] reproducibility: verify exited with " << code << '\n';
            return false;
        }
        report[i] = slurp(out / "verify_report.json");
    }
    const bool ok = !report[0].empty() && report[0] == report[1];
    std::cout << (ok ? "PASS" : "FAIL") << " [9] reproducibility: verify_report.json " << report[0].size()
              << " bytes, " << (ok ? "identical" : "different") << " across two runs\n";
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::set<int> only;
    std::string pxlab = PXLAB_PATH;
    std::string work = (fs::temp_directory_path() / "pxlap_acceptance").string();
    app.add_option("--criterion", only, "run only these criteria (1-9)")->check(CLI::Range(1, 9));
    app.add_option("--pxlab", pxlab, "pxlab executable used for criterion 9");
    app.add_option("--work", work, "scratch directory");
    CLI11_PARSE(app, argc, argv);
    fs::create_directories(work);

    bool all = true;
    Suite suite(default_config());
    for (int id = 1; id <= kCriterionCount; ++id) {
        if (!only.empty() && !only.count(id)) continue;
        const CriterionResult r = suite.run(id);
        const std::string budget = over_budget(r);
        const bool ok = r.passed && budget.empty();
        all = all && ok;
        std::cout << (ok ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " (" << seconds(r.seconds)
                  << "): " << r.summary;
        if (!budget.empty()) std::cout << " | over budget: " << budget;
        std::cout << '\n';
        std::cout.flush();
    }
    if (only.empty() || only.count(9)) all = reproducibility(pxlab, work) && all;
    return all ? 0 : 1;
}
