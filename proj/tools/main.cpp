// mmmeta: experiment runner for the hybrid mm-wave/microwave meta distribution.
//
// Exit codes: 0 ok, 1 validation failure or runtime error, 2 usage error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "experiments.hpp"
#include "mmmeta/config_io.hpp"
#include "plotdata.hpp"
#include "validation.hpp"

namespace {

using namespace mmmeta;
using namespace mmmeta::tools;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Flags {
    std::string config, output, mode = "analytic", variant = "hybrid", method = "both";
    // Unset means "use the kind default"; an explicitly empty value is an error.
    std::optional<std::string> theta_db, x_grid, sweep, antennas;
    std::uint64_t seed = 1;
    std::size_t realizations = 100000;
    unsigned threads = 0;
    std::vector<int> criteria;
    std::uint64_t validate_seed = AcceptanceOptions{}.seed;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON network config (human units)");
    sub->add_option("--output", f.output, "directory for per-curve CSV files and manifest.json");
    sub->add_option("--mode", f.mode, "analytic | mc | both");
    sub->add_option("--variant", f.variant, "hybrid | uwave | mmwave-backhaul");
    sub->add_option("--seed", f.seed, "Monte Carlo seed");
    sub->add_option("--realizations", f.realizations, "Monte Carlo realizations per point");
    sub->add_option("--threads", f.threads, "worker threads (0 = all cores)");
    sub->add_option("--theta-db", f.theta_db, "comma list of SIR/SNR thresholds in dB");
    sub->add_option("--x-grid", f.x_grid, "reliability grid, START:STOP:STEPS or a comma list");
    sub->add_option("--sweep", f.sweep, "NAME=START:STOP:STEPS or NAME=v1,v2,...");
    sub->add_option("--method", f.method, "gp | beta | both (meta and rate curves)");
}

ExperimentSpec build_spec(ExperimentKind kind, const Flags& f) {
    ExperimentSpec s;
    s.kind = kind;
    s.mode = mode_from_string(f.mode);
    try {
        s.variant = variant_from_string(f.variant);
    } catch (const std::invalid_argument& e) {
        throw SpecError(std::string("variant: ") + e.what());
    }
    s.method = method_from_string(f.method);
    s.seed = f.seed;
    s.n_realizations = f.realizations;
    s.threads = f.threads;
    s.output_path = f.output;
    if (f.theta_db) s.theta_db = parse_grid(*f.theta_db);
    if (f.x_grid) s.x_grid = parse_grid(*f.x_grid);
    if (f.antennas) s.antennas = parse_grid(*f.antennas);
    if (f.sweep) s.sweep = parse_sweep(*f.sweep);
    return s;
}

int run_validate(const Flags& f) {
    AcceptanceOptions o;
    o.n_realizations = f.realizations;
    o.seed = f.validate_seed;
    o.threads = f.threads;
    const auto ids = f.criteria.empty() ? all_criteria() : f.criteria;
    for (int id : ids) (void)criterion_title(id);
    bool all = true;
    for (int id : ids) {
        const CriterionResult r = run_criterion(id, o);
        all = all && r.pass;
        std::printf("%s criterion %d: %s (%.1f s)\n  %s\n", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(),
                    r.seconds, r.detail.c_str());
        std::fflush(stdout);
    }
    return all ? kExitOk : kExitFailed;
}

int run_kind(ExperimentKind kind, const Flags& f) {
    const ExperimentSpec spec = with_defaults(build_spec(kind, f));
    validate_spec(spec);
    const NetworkConfig cfg = f.config.empty() ? NetworkConfig{} : load_config(f.config);
    const ResultTable t = run_experiment(spec, cfg);
    for (const auto& n : t.notes) std::cerr << "note: " << n << "\n";
    if (f.output.empty()) {
        std::cout << to_csv(t);
    } else {
        for (const auto& p : emit_plotdata(t, f.output)) std::cout << "wrote " << p << "\n";
    }
    for (const auto& r : t.rows)
        if (!r.error.empty() && r.error.rfind("diverged", 0) != 0) return kExitFailed;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Meta distribution of SIR/SNR and rate in hybrid mm-wave/microwave cellular networks"};
    app.require_subcommand(1);
    Flags f;
    struct Sub {
        const char* name;
        const char* help;
        ExperimentKind kind;
    };
    const Sub subs[] = {
        {"assoc", "association probabilities over a parameter sweep", ExperimentKind::Assoc},
        {"meta", "meta distribution curves over x", ExperimentKind::Meta},
        {"coverage", "M1 and variance of the CSP over a threshold sweep", ExperimentKind::Coverage},
        {"delay", "mean local delay and jitter over a parameter sweep", ExperimentKind::Delay},
        {"rate", "rate meta distribution per antenna count", ExperimentKind::Rate},
    };
    std::vector<std::pair<CLI::App*, ExperimentKind>> cmds;
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        add_common(sub, f);
        if (s.kind == ExperimentKind::Rate) sub->add_option("--antennas", f.antennas, "comma list of array sizes");
        cmds.emplace_back(sub, s.kind);
    }
    CLI::App* val = app.add_subcommand("validate", "run the acceptance criteria; exit 1 if any fails");
    val->add_option("--criterion", f.criteria, "criterion ids to run (default all)");
    val->add_option("--realizations", f.realizations, "Monte Carlo realizations");
    val->add_option("--seed", f.validate_seed, "Monte Carlo seed");
    val->add_option("--threads", f.threads, "worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    try {
        if (val->parsed()) return run_validate(f);
        for (const auto& [sub, kind] : cmds)
            if (sub->parsed()) return run_kind(kind, f);
    } catch (const SpecError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailed;
    }
    return kExitUsage;
}
