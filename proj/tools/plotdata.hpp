#pragma once

#include <string>
#include <vector>

#include "experiments.hpp"

namespace mmmeta::tools {

/// Writes one CSV per curve plus manifest.json into `dir` and returns the
/// paths written. Only "csv" is supported. Output is byte-identical for
/// identical tables.
std::vector<std::string> emit_plotdata(const ResultTable& table, const std::string& dir,
                                       const std::string& format = "csv");

/// File stem used for a curve: every character outside [A-Za-z0-9.-] becomes '_'.
std::string curve_file_stem(const std::string& curve);

}  // namespace mmmeta::tools
