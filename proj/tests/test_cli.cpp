#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "experiments.hpp"
#include "json.hpp"
#include "plotdata.hpp"

#ifndef MMMETA_CLI_PATH
#error "MMMETA_CLI_PATH must name the mmmeta executable"
#endif

namespace fs = std::filesystem;
using namespace mmmeta;
using namespace mmmeta::tools;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("mmmeta_test_cli_" + name);
    fs::remove_all(p);
    return p;
}

int cli(const std::string& args) {
    const std::string cmd = std::string("\"") + MMMETA_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentSpec spec_of(ExperimentKind k) {
    ExperimentSpec s;
    s.kind = k;
    return with_defaults(s);
}

}  // namespace

TEST_CASE("CSV column contract") {
    const std::vector<std::string> want{"sweep_value", "curve", "analytic", "empirical", "std_error", "abs_diff", "error"};
    CHECK(csv_columns() == want);

    ResultTable t;
    t.rows.push_back({1.5, "a", 0.25, std::nan(""), 0.0, std::nan(""), ""});
    t.rows.push_back({2.5, "b", INFINITY, 0.5, 0.01, 0.0, "diverged"});
    const std::string csv = to_csv(t);
    std::istringstream in(csv);
    std::string header, r1, r2;
    std::getline(in, header);
    std::getline(in, r1);
    std::getline(in, r2);
    CHECK(header == "sweep_value,curve,analytic,empirical,std_error,abs_diff,error");
    CHECK(r1 == "1.5,a,0.25,nan,0,nan,");
    CHECK(r2 == "2.5,b,inf,0.5,0.01,0,diverged");
    CHECK(to_csv(t, "b").find("1.5,a") == std::string::npos);
}

TEST_CASE("grid and sweep parsing") {
    CHECK(parse_grid("1:3:3") == std::vector<double>{1, 2, 3});
    CHECK(parse_grid("0.5") == std::vector<double>{0.5});
    CHECK(parse_grid("-10,0,10") == std::vector<double>{-10, 0, 10});
    const auto g = parse_grid("0.05:0.95:19");
    CHECK(g.size() == 19);
    CHECK(g[18] == doctest::Approx(0.95));
    CHECK_THROWS_AS(parse_grid(""), SpecError);
    CHECK_THROWS_AS(parse_grid("1:2"), SpecError);
    CHECK_THROWS_AS(parse_grid("1:2:0"), SpecError);
    CHECK_THROWS_AS(parse_grid("a,b"), SpecError);

    const Sweep s = parse_sweep("small.density_lambda2=20:100:9");
    CHECK(s.name == "small.density_lambda2");
    CHECK(s.grid.size() == 9);
    CHECK_THROWS_AS(parse_sweep("nogrid"), SpecError);
    CHECK_THROWS_AS(parse_sweep("x="), SpecError);
}

TEST_CASE("spec validation") {
    ExperimentSpec s = spec_of(ExperimentKind::Assoc);
    CHECK_NOTHROW(validate_spec(s));
    s.sweep.grid.clear();
    CHECK_THROWS_AS(validate_spec(s), SpecError);
    s.sweep.grid = {3, 2, 1};
    CHECK_THROWS_AS(validate_spec(s), SpecError);
    s.sweep = {"small.no_such_key", {1, 2}};
    CHECK_THROWS_AS(validate_spec(s), SpecError);

    ExperimentSpec mc = spec_of(ExperimentKind::Coverage);
    mc.mode = Mode::MonteCarlo;
    mc.n_realizations = 99;
    CHECK_THROWS_AS(validate_spec(mc), SpecError);
    mc.n_realizations = 100;
    CHECK_NOTHROW(validate_spec(mc));

    ExperimentSpec meta = spec_of(ExperimentKind::Meta);
    meta.sweep = {"x", {0.5, 1.5}};
    CHECK_THROWS_AS(validate_spec(meta), SpecError);
}

TEST_CASE("association sweep") {
    ExperimentSpec s = spec_of(ExperimentKind::Assoc);
    s.sweep = {"small.density_lambda2", {1, 10, 40, 100}};
    const ResultTable t = run_experiment(s, NetworkConfig{});
    CHECK(t.curves() == std::vector<std::string>{"a1", "a2_los", "a2_nlos"});
    CHECK(t.sweep_unit == "m^-2");
    double prev = -1;
    for (const auto& r : t.rows) {
        if (r.curve != "a2_los") continue;
        CHECK(r.analytic >= prev);
        prev = r.analytic;
    }
    CHECK(t.rows.front().sweep_value == doctest::Approx(1e-6));
}

TEST_CASE("coverage table in both modes") {
    ExperimentSpec s = spec_of(ExperimentKind::Coverage);
    s.sweep = {"theta_db", {-5, 0, 5}};
    s.mode = Mode::Both;
    s.n_realizations = 500;
    s.seed = 3;
    const ResultTable t = run_experiment(s, NetworkConfig{});
    CHECK(t.curves() == std::vector<std::string>{"m1", "variance"});
    CHECK(t.sweep_name == "theta");
    CHECK(t.rows.front().sweep_value == doctest::Approx(std::pow(10.0, -0.5)));
    for (const auto& r : t.rows) {
        CHECK(std::isfinite(r.empirical));
        CHECK(r.std_error > 0);
        CHECK(r.abs_diff == doctest::Approx(std::abs(r.analytic - r.empirical)));
    }
}

TEST_CASE("plot data files and manifest") {
    ExperimentSpec s = spec_of(ExperimentKind::Coverage);
    s.sweep = {"theta_db", {-3, 0}};
    const ResultTable t = run_experiment(s, NetworkConfig{});
    const fs::path dir = scratch_dir("plot");
    const auto written = emit_plotdata(t, dir.string());
    CHECK(written.size() == 3);
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["kind"] == "coverage");
    CHECK(manifest["curves"].size() == 2);
    CHECK(manifest["columns"].size() == csv_columns().size());
    for (const auto& c : manifest["curves"]) {
        const fs::path f = dir / c["file"].get<std::string>();
        REQUIRE(fs::exists(f));
        CHECK(slurp(f) == to_csv(t, c["name"].get<std::string>()));
    }
    const std::string before = slurp(dir / "manifest.json");
    emit_plotdata(t, dir.string());
    CHECK(slurp(dir / "manifest.json") == before);
    fs::remove_all(dir);

    CHECK(curve_file_stem("theta_db=10/gp") == "theta_db_10_gp");
    CHECK_THROWS_AS(emit_plotdata(t, scratch_dir("fmt").string(), "parquet"), SpecError);
}

TEST_CASE("empty table is rejected before any write") {
    const fs::path dir = scratch_dir("empty");
    CHECK_THROWS_AS(emit_plotdata(ResultTable{}, dir.string()), SpecError);
    CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("exit codes") {
    CHECK(cli("") == 2);
    CHECK(cli("--help") == 0);
    CHECK(cli("frobnicate") == 2);
    CHECK(cli("assoc --sweep small.density_lambda2=10:70:3") == 0);
    CHECK(cli("assoc --mode sideways") == 2);
    CHECK(cli("coverage --sweep theta_db=5,0") == 2);
    CHECK(cli("validate --criterion 42") == 2);
    CHECK(cli("validate --criterion 6") == 0);
    CHECK(cli("validate --criterion 2") == 1);

    const fs::path dir = scratch_dir("cli_empty");
    CHECK(cli("assoc --sweep small.density_lambda2= --output " + dir.string()) == 2);
    CHECK_FALSE(fs::exists(dir));
}
