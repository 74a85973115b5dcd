#include "nomacomp/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nomacomp/errors.hpp"
#include "nomacomp/rng.hpp"

namespace nomacomp {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Scheme, std::string_view>, 4> kSchemeNames{{
    {Scheme::no_comp, "no_comp"},
    {Scheme::sc_jt_comp, "sc_jt_comp"},
    {Scheme::gc_jt_comp, "gc_jt_comp"},
    {Scheme::game_jt_comp, "game_jt_comp"},
}};

json cqi_to_json(const std::array<CqiEntry, CqiTable::kRows>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"cqi", r.index},
                       {"modulation_order", r.modulation_order},
                       {"code_rate_x1024", r.code_rate_x1024},
                       {"sinr_threshold_db", r.sinr_threshold_db}});
    }
    return arr;
}

json to_json(const ScenarioConfig& c) {
    json j;
    j["scheme"] = std::string(to_string(c.scheme));
    j["seed"] = c.seed;
    j["ttis"] = c.ttis;
    j["rrh_count"] = c.rrh_count;
    j["ues_per_cell"] = c.ues_per_cell;
    j["circumradius_m"] = c.circumradius_m;
    j["rrh_height_m"] = c.rrh_height_m;
    j["ue_height_m"] = c.ue_height_m;
    j["ue_speed_kmh"] = c.ue_speed_kmh;
    j["carrier_ghz"] = c.carrier_ghz;
    j["tx_power_dbm"] = c.tx_power_dbm;
    j["num_antennas"] = c.num_antennas;
    j["users_per_cluster"] = c.users_per_cluster;
    j["rrh_gain_dbi"] = c.rrh_gain_dbi;
    j["ue_gain_dbi"] = c.ue_gain_dbi;
    j["shadow_std_db"] = c.shadow_std_db;
    j["bandwidth_mhz"] = c.bandwidth_mhz;
    j["subcarrier_spacing_khz"] = c.subcarrier_spacing_khz;
    j["num_rbs"] = c.num_rbs;
    j["noise_figure_db"] = c.noise_figure_db;
    j["thermal_noise_dbm_hz"] = c.thermal_noise_dbm_hz;
    j["tti_s"] = c.tti_s;
    j["symbols_per_slot"] = c.symbols_per_slot;
    j["dmrs_symbols"] = c.dmrs_symbols;
    j["zf_condition_limit"] = c.zf_condition_limit;
    j["pathloss"] = {{"a", c.pathloss.a},
                     {"b", c.pathloss.b},
                     {"c", c.pathloss.c},
                     {"min_distance_m", c.pathloss.min_distance_m}};
    j["cqi_table"] = cqi_to_json(c.cqi_rows);
    j["sinr_averaging"] = c.sinr_averaging == SinrAveraging::linear ? "linear" : "db";
    j["p_ftpc"] = c.p_ftpc;
    j["d_f"] = c.d_f;
    j["edge_fraction"] = c.edge_fraction;
    j["ci_threshold_db"] = c.ci_threshold_db;
    j["max_coalition_size"] = c.max_coalition_size;
    j["static_cluster_size"] = c.static_cluster_size;
    j["greedy_max_size"] = c.greedy_max_size;
    return j;
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    try {
        if constexpr (std::is_same_v<T, int>) {
            if (!it->is_number_integer()) throw ConfigError("");
            const auto v = it->get<std::int64_t>();
            if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) throw ConfigError("");
            out = static_cast<int>(v);
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<std::int64_t>() >= 0)) {
                throw ConfigError("");
            }
            out = it->get<std::uint64_t>();
        } else if constexpr (std::is_same_v<T, double>) {
            if (!it->is_number()) throw ConfigError("");
            out = it->get<double>();
        } else {
            out = it->get<T>();
        }
    } catch (const std::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.contains(it.key())) {
            throw ConfigError("unknown config key '" + where + it.key() + "'");
        }
    }
}

void from_json(const json& j, ScenarioConfig& c) {
    if (!j.is_object()) {
        throw ConfigError("config document must be a JSON object");
    }
    std::set<std::string> known;
    const json defaults = to_json(c);
    for (auto it = defaults.begin(); it != defaults.end(); ++it) known.insert(it.key());
    reject_unknown(j, known, "");

    if (const auto it = j.find("scheme"); it != j.end()) {
        if (!it->is_string()) throw ConfigError("config key 'scheme' has the wrong type");
        c.scheme = parse_scheme(it->get<std::string>());
    }
    read(j, "seed", c.seed);
    read(j, "ttis", c.ttis);
    read(j, "rrh_count", c.rrh_count);
    read(j, "ues_per_cell", c.ues_per_cell);
    read(j, "circumradius_m", c.circumradius_m);
    read(j, "rrh_height_m", c.rrh_height_m);
    read(j, "ue_height_m", c.ue_height_m);
    read(j, "ue_speed_kmh", c.ue_speed_kmh);
    read(j, "carrier_ghz", c.carrier_ghz);
    read(j, "tx_power_dbm", c.tx_power_dbm);
    read(j, "num_antennas", c.num_antennas);
    read(j, "users_per_cluster", c.users_per_cluster);
    read(j, "rrh_gain_dbi", c.rrh_gain_dbi);
    read(j, "ue_gain_dbi", c.ue_gain_dbi);
    read(j, "shadow_std_db", c.shadow_std_db);
    read(j, "bandwidth_mhz", c.bandwidth_mhz);
    read(j, "subcarrier_spacing_khz", c.subcarrier_spacing_khz);
    read(j, "num_rbs", c.num_rbs);
    read(j, "noise_figure_db", c.noise_figure_db);
    read(j, "thermal_noise_dbm_hz", c.thermal_noise_dbm_hz);
    read(j, "tti_s", c.tti_s);
    read(j, "symbols_per_slot", c.symbols_per_slot);
    read(j, "dmrs_symbols", c.dmrs_symbols);
    read(j, "zf_condition_limit", c.zf_condition_limit);
    if (const auto it = j.find("pathloss"); it != j.end()) {
        if (!it->is_object()) throw ConfigError("config key 'pathloss' must be an object");
        reject_unknown(*it, {"a", "b", "c", "min_distance_m"}, "pathloss.");
        read(*it, "a", c.pathloss.a);
        read(*it, "b", c.pathloss.b);
        read(*it, "c", c.pathloss.c);
        read(*it, "min_distance_m", c.pathloss.min_distance_m);
    }
    if (const auto it = j.find("cqi_table"); it != j.end()) {
        if (!it->is_array() || it->size() != CqiTable::kRows) {
            throw ConfigError("config key 'cqi_table' must list exactly 15 rows");
        }
        for (int i = 0; i < CqiTable::kRows; ++i) {
            const json& row = (*it)[i];
            if (!row.is_object()) throw ConfigError("cqi_table rows must be objects");
            reject_unknown(row, {"cqi", "modulation_order", "code_rate_x1024", "sinr_threshold_db"}, "cqi_table[].");
            CqiEntry& e = c.cqi_rows[i];
            read(row, "cqi", e.index);
            read(row, "modulation_order", e.modulation_order);
            read(row, "code_rate_x1024", e.code_rate_x1024);
            read(row, "sinr_threshold_db", e.sinr_threshold_db);
        }
    }
    if (const auto it = j.find("sinr_averaging"); it != j.end()) {
        const std::string v = it->is_string() ? it->get<std::string>() : "";
        if (v == "linear") {
            c.sinr_averaging = SinrAveraging::linear;
        } else if (v == "db") {
            c.sinr_averaging = SinrAveraging::db;
        } else {
            throw ConfigError("sinr_averaging must be \"linear\" or \"db\"");
        }
    }
    read(j, "p_ftpc", c.p_ftpc);
    read(j, "d_f", c.d_f);
    read(j, "edge_fraction", c.edge_fraction);
    read(j, "ci_threshold_db", c.ci_threshold_db);
    read(j, "max_coalition_size", c.max_coalition_size);
    read(j, "static_cluster_size", c.static_cluster_size);
    read(j, "greedy_max_size", c.greedy_max_size);
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

}  // namespace

std::string_view to_string(Scheme s) {
    for (const auto& [v, name] : kSchemeNames) {
        if (v == s) return name;
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    for (const auto& [v, n] : kSchemeNames) {
        if (n == name) return v;
    }
    if (name == "none" || name == "nocomp") return Scheme::no_comp;
    if (name == "sc") return Scheme::sc_jt_comp;
    if (name == "gc") return Scheme::gc_jt_comp;
    if (name == "game") return Scheme::game_jt_comp;
    throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

double ScenarioConfig::subcarrier_noise_w() const {
    return noise_power_w(subcarrier_spacing_khz * 1e3, thermal_noise_dbm_hz, noise_figure_db);
}

TbsParams ScenarioConfig::tbs_params() const {
    TbsParams p;
    p.subcarriers_per_rb = subcarriers_per_rb();
    p.symbols_per_slot = symbols_per_slot;
    p.dmrs_symbols = dmrs_symbols;
    return p;
}

void ScenarioConfig::validate() const {
    const auto finite = [](double x) { return std::isfinite(x); };
    require(ttis >= 0, "ttis must be >= 0");
    require(rrh_count >= 1 && rrh_count <= 64, "rrh_count must lie in [1, 64]");
    require(ues_per_cell >= 1, "ues_per_cell must be >= 1");
    require(finite(circumradius_m) && circumradius_m > 0.0, "circumradius_m must be positive");
    require(finite(rrh_height_m) && rrh_height_m >= 0.0, "rrh_height_m must be non-negative");
    require(finite(ue_height_m) && ue_height_m >= 0.0, "ue_height_m must be non-negative");
    require(finite(ue_speed_kmh) && ue_speed_kmh >= 0.0, "ue_speed_kmh must be non-negative");
    require(finite(carrier_ghz) && carrier_ghz > 0.0, "carrier_ghz must be positive");
    require(finite(tx_power_dbm), "tx_power_dbm must be finite");
    require(num_antennas >= 1 && num_antennas <= 16, "num_antennas must lie in [1, 16]");
    require(users_per_cluster == 2, "users_per_cluster must be 2 (strong/weak pairing)");
    require(finite(rrh_gain_dbi) && finite(ue_gain_dbi), "antenna gains must be finite");
    require(finite(shadow_std_db) && shadow_std_db >= 0.0, "shadow_std_db must be non-negative");
    require(finite(bandwidth_mhz) && bandwidth_mhz > 0.0, "bandwidth_mhz must be positive");
    require(finite(subcarrier_spacing_khz) && subcarrier_spacing_khz > 0.0, "subcarrier_spacing_khz must be positive");
    require(num_rbs >= 1, "num_rbs must be >= 1");
    require(num_rbs * subcarriers_per_rb() * subcarrier_spacing_khz * 1e3 <= bandwidth_mhz * 1e6 + 1e-6,
            "num_rbs does not fit the bandwidth");
    require(finite(noise_figure_db) && finite(thermal_noise_dbm_hz), "noise parameters must be finite");
    require(finite(tti_s) && tti_s > 0.0, "tti_s must be positive");
    require(symbols_per_slot >= 1, "symbols_per_slot must be >= 1");
    require(dmrs_symbols >= 0 && dmrs_symbols < symbols_per_slot, "dmrs_symbols must lie in [0, symbols_per_slot)");
    require(zf_condition_limit > 1.0, "zf_condition_limit must exceed 1");
    require(finite(pathloss.a) && finite(pathloss.b) && finite(pathloss.c), "pathloss coefficients must be finite");
    require(finite(pathloss.min_distance_m) && pathloss.min_distance_m > 0.0, "pathloss.min_distance_m must be positive");
    try {
        (void)cqi_table();
    } catch (const InvalidInput& e) {
        throw ConfigError(std::string("cqi_table: ") + e.what());
    }
    require(p_ftpc >= 0.0 && p_ftpc <= 1.0, "p_ftpc must lie in [0, 1]");
    require(d_f >= 0.0 && d_f <= 1.0, "d_f must lie in [0, 1]");
    require(edge_fraction > 0.0 && edge_fraction < 1.0, "edge_fraction must lie in (0, 1)");
    require(finite(ci_threshold_db), "ci_threshold_db must be finite");
    require(max_coalition_size >= 1, "max_coalition_size must be >= 1");
    require(static_cluster_size >= 1, "static_cluster_size must be >= 1");
    require(greedy_max_size >= 1 && greedy_max_size <= 8, "greedy_max_size must lie in [1, 8]");
}

ScenarioConfig desk_scale_config() {
    ScenarioConfig c;
    c.rrh_count = 7;
    c.ues_per_cell = 6;
    c.num_rbs = 12;
    c.num_antennas = 2;
    c.ttis = 200;
    return c;
}

std::string config_to_json(const ScenarioConfig& c) { return to_json(c).dump(2) + "\n"; }

ScenarioConfig config_from_json(std::string_view text, const ScenarioConfig& base) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ScenarioConfig c = base;
    from_json(j, c);
    c.validate();
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

ScenarioConfig with_axis(const ScenarioConfig& c, std::string_view axis, double value) {
    json j = to_json(c);
    const auto it = j.find(std::string(axis));
    if (it == j.end() || !it->is_number()) {
        throw ConfigError("unknown or non-numeric sweep axis '" + std::string(axis) + "'");
    }
    if (it->is_number_integer() || it->is_number_unsigned()) {
        if (value != std::floor(value)) {
            throw ConfigError("sweep axis '" + std::string(axis) + "' needs integer values");
        }
        *it = static_cast<std::int64_t>(value);
    } else {
        *it = value;
    }
    ScenarioConfig out;
    from_json(j, out);
    out.validate();
    return out;
}

std::uint64_t config_hash(const ScenarioConfig& c) { return fnv1a(to_json(c).dump()); }

}  // namespace nomacomp
