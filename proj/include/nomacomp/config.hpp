#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "nomacomp/channel.hpp"
#include "nomacomp/link_adaptation.hpp"

namespace nomacomp {

enum class Scheme { no_comp, sc_jt_comp, gc_jt_comp, game_jt_comp };

std::string_view to_string(Scheme s);
/// Accepts the canonical names plus the short forms none, sc, gc, game.
Scheme parse_scheme(std::string_view name);

struct ScenarioConfig {
    Scheme scheme = Scheme::game_jt_comp;
    std::uint64_t seed = 1;
    int ttis = 1000;

    // Network.
    int rrh_count = 12;
    int ues_per_cell = 15;
    double circumradius_m = 125.0;
    double rrh_height_m = 10.0;
    double ue_height_m = 1.5;
    double ue_speed_kmh = 5.0;

    // Radio.
    double carrier_ghz = 3.5;
    double tx_power_dbm = 30.0;
    int num_antennas = 4;
    int users_per_cluster = 2;
    double rrh_gain_dbi = 8.17;
    double ue_gain_dbi = 0.0;
    double shadow_std_db = 4.0;
    double bandwidth_mhz = 20.0;
    double subcarrier_spacing_khz = 15.0;
    int num_rbs = 106;
    double noise_figure_db = 9.0;
    double thermal_noise_dbm_hz = -174.0;
    double tti_s = 1e-3;
    int symbols_per_slot = 14;
    int dmrs_symbols = 2;
    double zf_condition_limit = 1e6;
    PathlossModel pathloss;
    std::array<CqiEntry, CqiTable::kRows> cqi_rows = CqiTable::nr_256qam().rows();
    SinrAveraging sinr_averaging = SinrAveraging::linear;

    // Clustering.
    double p_ftpc = 0.4;
    double d_f = 0.4;
    double edge_fraction = 0.2;
    double ci_threshold_db = 10.0;
    int max_coalition_size = 4;
    int static_cluster_size = 4;
    int greedy_max_size = 4;

    double tx_power_w() const { return db_to_linear(tx_power_dbm) * 1e-3; }
    int subcarriers_per_rb() const { return 12; }
    int total_subcarriers() const { return num_rbs * subcarriers_per_rb(); }
    double subcarrier_noise_w() const;
    CqiTable cqi_table() const { return CqiTable(cqi_rows); }
    TbsParams tbs_params() const;

    /// Throws ConfigError naming the first offending field.
    void validate() const;

    bool operator==(const ScenarioConfig&) const = default;
};

/// 7 RRHs, 6 UEs per cell, 12 RBs, two antennas, 200 TTIs.
ScenarioConfig desk_scale_config();

/// Canonical JSON text (sorted keys, 2-space indent).
std::string config_to_json(const ScenarioConfig& c);

/// Keys absent from `text` keep their defaults; unknown keys, wrong types
/// and invalid values throw ConfigError.
ScenarioConfig config_from_json(std::string_view text, const ScenarioConfig& base = {});

ScenarioConfig load_config(const std::string& path);

/// Copy of `c` with one top-level numeric field replaced, validated.
/// Throws ConfigError for unknown or non-numeric axes.
ScenarioConfig with_axis(const ScenarioConfig& c, std::string_view axis, double value);

/// Hash of the canonical JSON form.
std::uint64_t config_hash(const ScenarioConfig& c);

}  // namespace nomacomp
