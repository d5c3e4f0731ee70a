#pragma once

#include <string>

#include "mmmeta/model.hpp"

namespace mmmeta {

// Config files use human units and are converted to SI exactly once here:
// densities in points/km^2, powers in dBm, biases and gains in dB, SIR
// thresholds in dB, frequencies and bandwidths in GHz, rates in Gbit/s,
// distances in metres. Missing keys keep their defaults; unknown keys are
// rejected with their path.

NetworkConfig config_from_json(const std::string& text);
std::string config_to_json(const NetworkConfig& cfg);

NetworkConfig load_config(const std::string& path);
void save_config(const NetworkConfig& cfg, const std::string& path);

/// Unit label of a config key such as "macro.power_p1" (empty if unknown).
std::string config_unit(const std::string& dotted_key);

/// SI value of a human-unit value for this key, and the SI unit label.
double config_value_to_si(const std::string& dotted_key, double human_value);
std::string config_si_unit(const std::string& dotted_key);

/// Set one field from a human-unit value, e.g. ("small.density_lambda2", 50).
void set_config_field(NetworkConfig& cfg, const std::string& dotted_key, double human_value);

/// Human-unit value of one field.
double get_config_field(const NetworkConfig& cfg, const std::string& dotted_key);

}  // namespace mmmeta
