// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//   acceptance [--criterion N]... [--realizations N] [--seed S]

#include <cstdio>
#include <vector>

#include "CLI11.hpp"
#include "validation.hpp"

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> ids;
    mmmeta::tools::AcceptanceOptions opt;
    app.add_option("--criterion", ids, "criteria to run (default all)")->check(CLI::Range(1, 8));
    app.add_option("--realizations", opt.n_realizations, "Monte Carlo realizations");
    app.add_option("--seed", opt.seed, "Monte Carlo seed");
    app.add_option("--threads", opt.threads, "worker threads (0 = all cores)");
    CLI11_PARSE(app, argc, argv);
    if (ids.empty()) ids = mmmeta::tools::all_criteria();

    int failed = 0;
    for (int id : ids) {
        const auto r = mmmeta::tools::run_criterion(id, opt);
        std::printf("%s [%d] %s (%.1f s)\n    %s\n", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds,
                    r.detail.c_str());
        std::fflush(stdout);
        failed += !r.pass;
    }
    return failed ? 1 : 0;
}
