#include "mmmeta/config_io.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mmmeta {
namespace {

enum class Unit { None, PerKm2, Dbm, Db, Ghz, Gbps, Metre, Count };

struct Field {
    const char* section;  // empty for top level
    const char* key;
    Unit unit;
    std::function<double&(NetworkConfig&)> real;
    std::function<int&(NetworkConfig&)> integer;
};

const char* unit_name(Unit u) {
    switch (u) {
        case Unit::None: return "linear";
        case Unit::PerKm2: return "points/km^2";
        case Unit::Dbm: return "dBm";
        case Unit::Db: return "dB";
        case Unit::Ghz: return "GHz";
        case Unit::Gbps: return "Gbit/s";
        case Unit::Metre: return "m";
        case Unit::Count: return "count";
    }
    return "";
}

double to_si(Unit u, double v) {
    switch (u) {
        case Unit::PerKm2: return per_km2_to_per_m2(v);
        case Unit::Dbm: return dbm_to_watt(v);
        case Unit::Db: return db_to_linear(v);
        case Unit::Ghz: return v * 1e9;
        case Unit::Gbps: return v * 1e9;
        default: return v;
    }
}

double from_si(Unit u, double v) {
    switch (u) {
        case Unit::PerKm2: return per_m2_to_per_km2(v);
        case Unit::Dbm: return watt_to_dbm(v);
        case Unit::Db: return linear_to_db(v);
        case Unit::Ghz: return v / 1e9;
        case Unit::Gbps: return v / 1e9;
        default: return v;
    }
}

#define REAL(sec, name, unit, expr) \
    Field{sec, name, unit, [](NetworkConfig& c) -> double& { return expr; }, nullptr}
#define INT(sec, name, expr) \
    Field{sec, name, Unit::Count, nullptr, [](NetworkConfig& c) -> int& { return expr; }}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        REAL("macro", "density_lambda1", Unit::PerKm2, c.macro.density_lambda1),
        REAL("macro", "power_p1", Unit::Dbm, c.macro.power_p1),
        REAL("macro", "bias_b1", Unit::Db, c.macro.bias_b1),
        REAL("macro", "ple_alpha1", Unit::None, c.macro.ple_alpha1),
        REAL("macro", "gain_g1_omni", Unit::Db, c.macro.gain_g1_omni),
        REAL("small", "density_lambda2", Unit::PerKm2, c.small.density_lambda2),
        REAL("small", "power_p2", Unit::Dbm, c.small.power_p2),
        REAL("small", "bias_b2", Unit::Db, c.small.bias_b2),
        REAL("small", "ple_alpha2_los", Unit::None, c.small.ple_alpha2_los),
        REAL("small", "ple_alpha2_nlos", Unit::None, c.small.ple_alpha2_nlos),
        INT("small", "n_antenna_elements", c.small.n_antenna_elements),
        INT("mmwave", "m_los", c.mmwave.m_los),
        INT("mmwave", "m_nlos", c.mmwave.m_nlos),
        REAL("mmwave", "omega_los", Unit::None, c.mmwave.omega_los),
        REAL("mmwave", "omega_nlos", Unit::None, c.mmwave.omega_nlos),
        REAL("mmwave", "los_ball_d", Unit::Metre, c.mmwave.los_ball_d),
        REAL("mmwave", "p_los", Unit::None, c.mmwave.p_los),
        REAL("mmwave", "p_nlos", Unit::None, c.mmwave.p_nlos),
        REAL("mmwave", "carrier_freq_mm", Unit::Ghz, c.mmwave.carrier_freq_mm),
        REAL("mmwave", "bandwidth_w2", Unit::Ghz, c.mmwave.bandwidth_w2),
        REAL("uwave", "bandwidth_w1", Unit::Ghz, c.uwave.bandwidth_w1),
        REAL("uwave", "access_fraction_eta", Unit::None, c.uwave.access_fraction_eta),
        REAL("uwave", "carrier_freq_uw", Unit::Ghz, c.uwave.carrier_freq_uw),
        REAL("device", "gain_gd_max", Unit::Db, c.device.gain_gd_max),
        REAL("device", "gain_gd_uw", Unit::Db, c.device.gain_gd_uw),
        REAL("thresholds", "theta_backhaul", Unit::Db, c.thresholds.theta_backhaul),
        REAL("thresholds", "theta_device", Unit::Db, c.thresholds.theta_device),
        REAL("thresholds", "rate_t1", Unit::Gbps, c.thresholds.rate_t1),
        REAL("thresholds", "rate_t2", Unit::Gbps, c.thresholds.rate_t2),
        REAL("thresholds", "rate_tbh", Unit::Gbps, c.thresholds.rate_tbh),
        REAL("thresholds", "reliability_x", Unit::None, c.thresholds.reliability_x),
        REAL("", "noise_figure_db", Unit::None, c.noise_figure_db),
        REAL("", "density_device", Unit::PerKm2, c.density_device),
    };
    return table;
}

#undef REAL
#undef INT

std::string dotted(const Field& f) {
    return f.section[0] ? std::string(f.section) + "." + f.key : std::string(f.key);
}

const Field& find(const std::string& key) {
    for (const auto& f : fields())
        if (dotted(f) == key) return f;
    throw std::invalid_argument("unknown config field: " + key);
}

void assign(NetworkConfig& cfg, const Field& f, double human, const std::string& path) {
    if (!std::isfinite(human)) throw std::invalid_argument(path + ": value must be finite");
    if (f.integer) {
        if (human != std::floor(human)) throw std::invalid_argument(path + ": expected an integer");
        f.integer(cfg) = static_cast<int>(human);
    } else {
        f.real(cfg) = to_si(f.unit, human);
    }
}

}  // namespace

NetworkConfig config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config root must be an object");
    NetworkConfig cfg;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& top = it.key();
        if (it->is_object()) {
            for (auto jt = it->begin(); jt != it->end(); ++jt) {
                const std::string path = top + "." + jt.key();
                const Field& f = find(path);
                if (!jt->is_number()) throw std::invalid_argument(path + ": expected a number");
                assign(cfg, f, jt->get<double>(), path);
            }
        } else {
            const Field& f = find(top);
            if (!it->is_number()) throw std::invalid_argument(top + ": expected a number");
            assign(cfg, f, it->get<double>(), top);
        }
    }
    return cfg;
}

std::string config_to_json(const NetworkConfig& cfg) {
    nlohmann::ordered_json j;
    NetworkConfig copy = cfg;
    for (const auto& f : fields()) {
        const double v = f.integer ? static_cast<double>(f.integer(copy)) : from_si(f.unit, f.real(copy));
        if (f.section[0]) {
            if (f.integer) j[f.section][f.key] = f.integer(copy);
            else j[f.section][f.key] = v;
        } else {
            j[f.key] = v;
        }
    }
    return j.dump(2);
}

NetworkConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

void save_config(const NetworkConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config: " + path);
    out << config_to_json(cfg) << "\n";
}

std::string config_unit(const std::string& dotted_key) {
    for (const auto& f : fields())
        if (dotted(f) == dotted_key) return unit_name(f.unit);
    return "";
}

double config_value_to_si(const std::string& dotted_key, double human_value) {
    return to_si(find(dotted_key).unit, human_value);
}

std::string config_si_unit(const std::string& dotted_key) {
    switch (find(dotted_key).unit) {
        case Unit::PerKm2: return "m^-2";
        case Unit::Dbm: return "W";
        case Unit::Db: return "linear";
        case Unit::Ghz: return "Hz";
        case Unit::Gbps: return "bit/s";
        case Unit::Metre: return "m";
        case Unit::Count: return "count";
        case Unit::None: return "linear";
    }
    return "";
}

void set_config_field(NetworkConfig& cfg, const std::string& dotted_key, double human_value) {
    assign(cfg, find(dotted_key), human_value, dotted_key);
}

double get_config_field(const NetworkConfig& cfg, const std::string& dotted_key) {
    const Field& f = find(dotted_key);
    NetworkConfig copy = cfg;
    return f.integer ? static_cast<double>(f.integer(copy)) : from_si(f.unit, f.real(copy));
}

}  // namespace mmmeta
