// Runs acceptance criteria 1-11 and prints one pass/fail line per criterion.
// Usage: eqlayer_acceptance [--grid G] [--seed S] [--out DIR]

#include <CLI11.hpp>

#include <cstdio>

#include "eqlayer/report.hpp"
#include "eqlayer/verification.hpp"

int main(int argc, char** argv) {
    CLI::App app{"acceptance battery"};
    eqlayer::VerifyOptions o;
    app.add_option("--grid", o.grid, "base grid size");
    app.add_option("--seed", o.seed, "seed for randomized banks");
    app.add_option("--out", o.output_dir, "directory for artifacts");
    CLI11_PARSE(app, argc, argv);

    int failed = 0;
    for (int id = 1; id <= eqlayer::kCriterionCount; ++id) {
        const eqlayer::CriterionResult r = eqlayer::run_criterion(id, o);
        std::printf("criterion %2d %s: %s (%.1fs) %s\n", r.id, r.pass ? "PASS" : "FAIL", r.title.c_str(), r.seconds,
                    r.summary.c_str());
        std::fflush(stdout);
        if (!r.pass) {
            ++failed;
            for (const auto& c : r.report.checks)
                std::printf("    %s = %s (tolerance %s)%s\n", c.name.c_str(), eqlayer::format_double(c.value).c_str(),
                            eqlayer::format_double(c.tolerance).c_str(), c.pass ? "" : "  <- failed");
        }
    }
    std::printf("%d/%d criteria passed\n", eqlayer::kCriterionCount - failed, eqlayer::kCriterionCount);
    return failed == 0 ? 0 : 1;
}
