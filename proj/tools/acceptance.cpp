// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance --all
//   acceptance --criterion 6
#include "gmix/acceptance.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> ids;
    bool all = false;
    app.add_option("--criterion,-c", ids, "criterion id (repeatable)")->check(CLI::Range(1, gmix::criterion_count));
    app.add_flag("--all", all, "run every criterion");
    CLI11_PARSE(app, argc, argv);
    if (all || ids.empty()) {
        ids.clear();
        for (int i = 1; i <= gmix::criterion_count; ++i) ids.push_back(i);
    }

    // 4 and 5 read the same sweeps
    std::optional<std::vector<gmix::SweepReport>> sweeps;
    double sweep_seconds = 0.0;
    int failures = 0;
    for (int id : ids) {
        gmix::CriterionResult r;
        try {
            if (id == 4 || id == 5) {
                if (!sweeps) {
                    const auto t0 = std::chrono::steady_clock::now();
                    sweeps = gmix::location_law_sweeps();
                    sweep_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                }
                r = id == 4 ? gmix::criterion_location_count(&*sweeps) : gmix::criterion_location_core_error(&*sweeps);
                r.seconds = sweep_seconds;
                r.pass = r.pass && r.seconds < r.time_limit;
            } else {
                r = gmix::run_criterion(id);
            }
        } catch (const std::exception& e) {
            r.id = id;
            r.name = "error";
            r.measured = e.what();
            r.target = "no exception";
            r.pass = false;
        }
        std::cout << gmix::one_line(r) << std::endl;
        if (!r.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
