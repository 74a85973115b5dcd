#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nomacomp/baselines.hpp"
#include "nomacomp/channel.hpp"
#include "nomacomp/coalition_game.hpp"
#include "nomacomp/config.hpp"
#include "nomacomp/rng.hpp"
#include "nomacomp/topology.hpp"

namespace nomacomp {

struct UeTtiRecord {
    int ue = 0;
    int serving_rrh = 0;
    bool is_edge = false;
    double effective_sinr = 0.0;
    double throughput_bps = 0.0;
    double no_comp_throughput_bps = 0.0;
    int scheduled_rbs = 0;
};

struct TtiReport {
    int tti = 0;
    std::vector<UeTtiRecord> ues;
    Partition partition;
    bool activated = false;
    int handovers = 0;
    int edge_flips = 0;
    int dissolved = 0;
    int iterations = 0;
    int rounds = 0;
    int merge_tests = 0;
    int split_tests = 0;
    int merges_accepted = 0;
    int splits_accepted = 0;
    int size_rejections = 0;
    int gated_entries = 0;
    int zf_regularized = 0;
    std::vector<OperationRecord> accepted_ops;
    std::optional<bool> stable_admissible;
    std::optional<bool> stable_unrestricted;
};

struct RunSummary {
    Scheme scheme = Scheme::no_comp;
    std::uint64_t seed = 0;
    int rrh_count = 0;
    int ue_count = 0;
    int ttis = 0;

    double mean_throughput_bps = 0.0;
    double mean_edge_throughput_bps = 0.0;     ///< over (UE, TTI) samples that were edge
    double mean_nonedge_throughput_bps = 0.0;  ///< over (UE, TTI) samples that were non-edge
    double mean_edge_no_comp_bps = 0.0;
    double mean_nonedge_no_comp_bps = 0.0;

    std::vector<double> ue_avg_throughput_bps;
    std::vector<double> ue_avg_no_comp_bps;
    std::vector<double> ue_edge_fraction;

    // Sorted samples for the distribution plots.
    std::vector<double> cdf_edge_inst;
    std::vector<double> cdf_nonedge_inst;
    std::vector<double> cdf_edge_avg;
    std::vector<double> cdf_nonedge_avg;

    double decreased_inst_pct = 0.0;  ///< samples below the same-channel no-cooperation value
    double decreased_inst_edge_pct = 0.0;
    double decreased_inst_nonedge_pct = 0.0;
    std::int64_t nonedge_df_breaches = 0;  ///< non-edge samples below (1 - d_f) of no-cooperation

    /// UEs whose average throughput fell by more than 10, 20, 30, 40, 50 %.
    std::array<int, 5> reduced_more_than{};
    int ues_increased = 0;
    int ues_equal = 0;
    int ues_decreased = 0;

    int activations = 0;
    double avg_iterations = 0.0;   ///< per activation
    double avg_merge_tests = 0.0;  ///< per activation
    double avg_gated_per_rrh = 0.0;  ///< per activation, I_M entries at or below the threshold / L
    double avg_coalition_size = 0.0;
    double avg_max_coalition_size = 0.0;
    std::int64_t zf_regularized = 0;
    std::uint64_t shared_stream_digest = 0;
};

struct SimulationOptions {
    bool keep_reports = false;
    bool check_stability = false;      ///< admissible moves, game scheme only
    bool check_unrestricted = false;   ///< also every coalition collection; costly
    std::function<void(const TtiReport&)> on_tti;
};

/// One run, stepped one TTI at a time.
class Simulation {
  public:
    explicit Simulation(const ScenarioConfig& config, SimulationOptions options = {});
    ~Simulation();
    Simulation(Simulation&&) noexcept;
    Simulation& operator=(Simulation&&) noexcept;

    bool done() const;
    int current_tti() const;
    TtiReport step();
    RunSummary summary() const;

    const ScenarioConfig& config() const;
    const std::vector<Rrh>& rrhs() const;
    const std::vector<Ue>& ues() const;
    const Partition& partition() const;
    const HexLayout& layout() const;
    std::uint64_t shared_stream_digest() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct RunResult {
    ScenarioConfig config;
    RunSummary summary;
    std::vector<TtiReport> reports;  ///< empty unless keep_reports
};

RunResult run_simulation(const ScenarioConfig& config, const SimulationOptions& options = {});

/// Runs every scheme on the same seed; shared random streams stay aligned.
/// Throws ConfigError with fewer than two schemes.
std::vector<RunResult> paired_comparison(const ScenarioConfig& config, std::span<const Scheme> schemes,
                                         const SimulationOptions& options = {});

struct SweepRow {
    std::string axis;
    double value = 0.0;
    Scheme scheme = Scheme::no_comp;
    int runs = 0;
    double mean_throughput_bps = 0.0;
    double mean_edge_throughput_bps = 0.0;
    double mean_nonedge_throughput_bps = 0.0;
    double avg_coalition_size = 0.0;
    double avg_max_coalition_size = 0.0;
    double avg_iterations = 0.0;
    double decreased_inst_pct = 0.0;
};

/// For each value, `runs` seeds (base seed, base seed + 1, ...) averaged.
/// Throws ConfigError for an unknown axis.
std::vector<SweepRow> sweep(const ScenarioConfig& base, const std::string& axis, std::span<const double> values,
                            int runs);

}  // namespace nomacomp
