#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nomacomp/simulation.hpp"

namespace nomacomp {

/// Library version string.
std::string_view version();

enum class Emit { summary, per_tti, both };

/// "summary", "per-tti" or "both"; throws ConfigError otherwise.
Emit parse_emit(std::string_view name);

/// Shortest text that parses back to the same double.
std::string format_number(double x);

std::string_view summary_csv_header();
std::string summary_csv_row(const RunSummary& s);

struct RunManifest {
    std::string command;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    int runs = 1;
    std::vector<Scheme> schemes;
    double wall_time_s = 0.0;
};

std::string manifest_json(const RunManifest& m);

/// Writes the tables of one CLI invocation into a directory.
///
/// Column schemas (frozen):
///   summary.csv          summary_csv_header()
///   per_ue.csv           scheme,seed,ue,avg_throughput_bps,avg_no_comp_bps,edge_tti_fraction
///   cdf_<set>.csv        scheme,seed,index,throughput_bps   (ascending within a run)
///   per_tti.csv          scheme,seed,tti,ue,serving_rrh,is_edge,effective_sinr,throughput_bps,
///                        no_comp_throughput_bps,scheduled_rbs
///   per_tti_network.csv  scheme,seed,tti,partition,avg_coalition_size,max_coalition_size,activated,
///                        handovers,edge_flips,dissolved,iterations,merge_tests,split_tests,
///                        merges_accepted,splits_accepted,size_rejections,gated_entries,zf_regularized
///   sweep.csv            axis,value,scheme,runs,mean_throughput_bps,mean_edge_throughput_bps,
///                        mean_nonedge_throughput_bps,avg_coalition_size,avg_max_coalition_size,
///                        avg_iterations,decreased_inst_pct
/// Every failure to create or write a file throws IoError.
class OutputWriter {
  public:
    OutputWriter(std::filesystem::path dir, Emit emit);

    bool wants_per_tti() const { return emit_ != Emit::summary; }
    bool wants_summary() const { return emit_ != Emit::per_tti; }

    void write_tti(Scheme scheme, std::uint64_t seed, const TtiReport& r);
    void add_run(const RunSummary& s);
    void write_sweep(std::span<const SweepRow> rows);
    void write_config(const ScenarioConfig& c);
    void write_manifest(const RunManifest& m);

    /// Flushes and closes every table.
    void close();

  private:
    std::ofstream& table(std::ofstream& f, const char* name, std::string_view header);

    std::filesystem::path dir_;
    Emit emit_;
    std::ofstream summary_;
    std::ofstream per_ue_;
    std::ofstream cdf_edge_inst_;
    std::ofstream cdf_nonedge_inst_;
    std::ofstream cdf_edge_avg_;
    std::ofstream cdf_nonedge_avg_;
    std::ofstream per_tti_;
    std::ofstream per_tti_network_;
};

}  // namespace nomacomp
