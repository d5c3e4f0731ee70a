#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmmeta/model.hpp"
#include "mmmeta/moments.hpp"

namespace mmmeta::tools {

enum class ExperimentKind { Assoc, Meta, Coverage, Delay, Rate, Validate };
enum class Mode { Analytic, MonteCarlo, Both };
enum class AnalyticMethod { GilPelaez, Beta, Both };

const char* to_string(ExperimentKind k);
const char* to_string(Mode m);
ExperimentKind kind_from_string(const std::string& s);
Mode mode_from_string(const std::string& s);
AnalyticMethod method_from_string(const std::string& s);

/// Bad experiment description; the message starts with the offending field.
struct SpecError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Sweep {
    /// "x", "theta_db", or a config key such as "small.density_lambda2"
    /// (human units, see config_unit).
    std::string name;
    std::vector<double> grid;
};

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::Meta;
    Sweep sweep;
    Mode mode = Mode::Analytic;
    Variant variant = Variant::Hybrid;
    AnalyticMethod method = AnalyticMethod::Both;
    std::string output_path;
    std::uint64_t seed = 1;
    std::size_t n_realizations = 100000;
    unsigned threads = 0;
    /// Thresholds for meta curves, or the fixed threshold of a config sweep.
    std::vector<double> theta_db;
    /// Reliability grid for Meta and Rate when the sweep is not over x.
    std::vector<double> x_grid;
    /// Antenna counts for Rate curves.
    std::vector<double> antennas{10, 20, 40, 50};
};

/// Fills kind-specific defaults (sweep, thresholds) left empty.
ExperimentSpec with_defaults(ExperimentSpec spec);
/// Throws SpecError naming the field on the first broken rule.
void validate_spec(const ExperimentSpec& spec);

/// "START:STOP:STEPS" (STEPS points, ends included) or "v1,v2,...".
std::vector<double> parse_grid(const std::string& text);
/// "NAME=START:STOP:STEPS" or "NAME=v1,v2,...".
Sweep parse_sweep(const std::string& text);

struct ResultRow {
    double sweep_value = 0;
    std::string curve;
    double analytic = 0;
    double empirical = 0;
    double std_error = 0;
    double abs_diff = 0;
    /// Empty unless this point failed or the analytic value diverged.
    std::string error;
};

struct ResultTable {
    std::string kind;
    std::string sweep_name;
    std::string sweep_unit;
    std::string value_name;
    std::string value_unit;
    std::vector<ResultRow> rows;
    /// Annotations such as Monte Carlo warnings or correlation diagnostics.
    std::vector<std::string> notes;

    std::vector<std::string> curves() const;
};

/// Column order of every CSV this tool writes.
const std::vector<std::string>& csv_columns();
std::string to_csv(const ResultTable& t);
std::string to_csv(const ResultTable& t, const std::string& curve);

ResultTable run_experiment(const ExperimentSpec& spec, const NetworkConfig& cfg);

}  // namespace mmmeta::tools
