#include "nomacomp/output.hpp"

#include <charconv>
#include <cstdio>
#include <system_error>

#include <json.hpp>

#include "nomacomp/errors.hpp"

namespace nomacomp {

std::string_view version() { return NOMACOMP_VERSION; }

Emit parse_emit(std::string_view name) {
    if (name == "summary") return Emit::summary;
    if (name == "per-tti" || name == "per_tti") return Emit::per_tti;
    if (name == "both") return Emit::both;
    throw ConfigError("unknown emit mode '" + std::string(name) + "' (summary, per-tti, both)");
}

std::string format_number(double x) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) {
        throw InvalidInput("number does not format");
    }
    return std::string(buf, end);
}

namespace {

std::string hex64(std::uint64_t x) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(x));
    return buf;
}

constexpr std::string_view kSummaryHeader =
    "scheme,seed,rrh_count,ue_count,ttis,mean_throughput_bps,mean_edge_throughput_bps,"
    "mean_nonedge_throughput_bps,mean_edge_no_comp_bps,mean_nonedge_no_comp_bps,decreased_inst_pct,"
    "decreased_inst_edge_pct,decreased_inst_nonedge_pct,nonedge_df_breaches,reduced_gt10,reduced_gt20,"
    "reduced_gt30,reduced_gt40,reduced_gt50,ues_increased,ues_equal,ues_decreased,activations,avg_iterations,"
    "avg_merge_tests,avg_gated_per_rrh,avg_coalition_size,avg_max_coalition_size,zf_regularized,"
    "shared_stream_digest";

constexpr std::string_view kPerUeHeader = "scheme,seed,ue,avg_throughput_bps,avg_no_comp_bps,edge_tti_fraction";
constexpr std::string_view kCdfHeader = "scheme,seed,index,throughput_bps";
constexpr std::string_view kPerTtiHeader =
    "scheme,seed,tti,ue,serving_rrh,is_edge,effective_sinr,throughput_bps,no_comp_throughput_bps,scheduled_rbs";
constexpr std::string_view kPerTtiNetworkHeader =
    "scheme,seed,tti,partition,avg_coalition_size,max_coalition_size,activated,handovers,edge_flips,dissolved,"
    "iterations,merge_tests,split_tests,merges_accepted,splits_accepted,size_rejections,gated_entries,"
    "zf_regularized";
constexpr std::string_view kSweepHeader =
    "axis,value,scheme,runs,mean_throughput_bps,mean_edge_throughput_bps,mean_nonedge_throughput_bps,"
    "avg_coalition_size,avg_max_coalition_size,avg_iterations,decreased_inst_pct";

void check(const std::ofstream& f, const std::filesystem::path& p) {
    if (!f) {
        throw IoError("cannot write " + p.string());
    }
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    check(f, p);
    f << text;
    f.flush();
    check(f, p);
}

void write_cdf(std::ofstream& f, const RunSummary& s, const std::vector<double>& samples) {
    const std::string prefix = std::string(to_string(s.scheme)) + ',' + std::to_string(s.seed) + ',';
    for (std::size_t i = 0; i < samples.size(); ++i) {
        f << prefix << i << ',' << format_number(samples[i]) << '\n';
    }
}

}  // namespace

std::string_view summary_csv_header() { return kSummaryHeader; }

std::string summary_csv_row(const RunSummary& s) {
    std::string r;
    const auto add = [&r](const std::string& v) {
        if (!r.empty()) r += ',';
        r += v;
    };
    const auto num = [&add](double v) { add(format_number(v)); };
    const auto cnt = [&add](long long v) { add(std::to_string(v)); };
    add(std::string(to_string(s.scheme)));
    add(std::to_string(s.seed));
    cnt(s.rrh_count);
    cnt(s.ue_count);
    cnt(s.ttis);
    num(s.mean_throughput_bps);
    num(s.mean_edge_throughput_bps);
    num(s.mean_nonedge_throughput_bps);
    num(s.mean_edge_no_comp_bps);
    num(s.mean_nonedge_no_comp_bps);
    num(s.decreased_inst_pct);
    num(s.decreased_inst_edge_pct);
    num(s.decreased_inst_nonedge_pct);
    cnt(s.nonedge_df_breaches);
    for (const int k : s.reduced_more_than) cnt(k);
    cnt(s.ues_increased);
    cnt(s.ues_equal);
    cnt(s.ues_decreased);
    cnt(s.activations);
    num(s.avg_iterations);
    num(s.avg_merge_tests);
    num(s.avg_gated_per_rrh);
    num(s.avg_coalition_size);
    num(s.avg_max_coalition_size);
    cnt(s.zf_regularized);
    add(hex64(s.shared_stream_digest));
    return r;
}

std::string manifest_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["version"] = std::string(version());
    j["config_hash"] = hex64(m.config_hash);
    j["seed"] = m.seed;
    j["runs"] = m.runs;
    auto schemes = nlohmann::ordered_json::array();
    for (const Scheme s : m.schemes) schemes.push_back(std::string(to_string(s)));
    j["schemes"] = schemes;
    j["wall_time_s"] = m.wall_time_s;
    return j.dump(2) + "\n";
}

OutputWriter::OutputWriter(std::filesystem::path dir, Emit emit) : dir_(std::move(dir)), emit_(emit) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) {
        throw IoError("cannot create output directory " + dir_.string());
    }
}

std::ofstream& OutputWriter::table(std::ofstream& f, const char* name, std::string_view header) {
    if (!f.is_open()) {
        const auto p = dir_ / name;
        f.open(p, std::ios::binary | std::ios::trunc);
        check(f, p);
        f << header << '\n';
    }
    check(f, dir_ / name);
    return f;
}

void OutputWriter::write_tti(Scheme scheme, std::uint64_t seed, const TtiReport& r) {
    if (!wants_per_tti()) return;
    const std::string prefix = std::string(to_string(scheme)) + ',' + std::to_string(seed) + ',' +
                               std::to_string(r.tti) + ',';
    std::ofstream& ue = table(per_tti_, "per_tti.csv", kPerTtiHeader);
    for (const UeTtiRecord& u : r.ues) {
        ue << prefix << u.ue << ',' << u.serving_rrh << ',' << (u.is_edge ? 1 : 0) << ','
           << format_number(u.effective_sinr) << ',' << format_number(u.throughput_bps) << ','
           << format_number(u.no_comp_throughput_bps) << ',' << u.scheduled_rbs << '\n';
    }
    std::ofstream& net = table(per_tti_network_, "per_tti_network.csv", kPerTtiNetworkHeader);
    net << prefix << '"' << r.partition.to_string() << "\"," << format_number(r.partition.average_size()) << ','
        << r.partition.max_size() << ',' << (r.activated ? 1 : 0) << ',' << r.handovers << ',' << r.edge_flips
        << ',' << r.dissolved << ',' << r.iterations << ',' << r.merge_tests << ',' << r.split_tests << ','
        << r.merges_accepted << ',' << r.splits_accepted << ',' << r.size_rejections << ',' << r.gated_entries
        << ',' << r.zf_regularized << '\n';
}

void OutputWriter::add_run(const RunSummary& s) {
    if (!wants_summary()) return;
    table(summary_, "summary.csv", kSummaryHeader) << summary_csv_row(s) << '\n';
    std::ofstream& ue = table(per_ue_, "per_ue.csv", kPerUeHeader);
    for (std::size_t u = 0; u < s.ue_avg_throughput_bps.size(); ++u) {
        ue << to_string(s.scheme) << ',' << s.seed << ',' << u << ',' << format_number(s.ue_avg_throughput_bps[u])
           << ',' << format_number(s.ue_avg_no_comp_bps[u]) << ',' << format_number(s.ue_edge_fraction[u]) << '\n';
    }
    write_cdf(table(cdf_edge_inst_, "cdf_edge_inst.csv", kCdfHeader), s, s.cdf_edge_inst);
    write_cdf(table(cdf_nonedge_inst_, "cdf_nonedge_inst.csv", kCdfHeader), s, s.cdf_nonedge_inst);
    write_cdf(table(cdf_edge_avg_, "cdf_edge_avg.csv", kCdfHeader), s, s.cdf_edge_avg);
    write_cdf(table(cdf_nonedge_avg_, "cdf_nonedge_avg.csv", kCdfHeader), s, s.cdf_nonedge_avg);
}

void OutputWriter::write_sweep(std::span<const SweepRow> rows) {
    std::string text(kSweepHeader);
    text += '\n';
    for (const SweepRow& r : rows) {
        text += r.axis + ',' + format_number(r.value) + ',' + std::string(to_string(r.scheme)) + ',' +
                std::to_string(r.runs) + ',' + format_number(r.mean_throughput_bps) + ',' +
                format_number(r.mean_edge_throughput_bps) + ',' + format_number(r.mean_nonedge_throughput_bps) +
                ',' + format_number(r.avg_coalition_size) + ',' + format_number(r.avg_max_coalition_size) + ',' +
                format_number(r.avg_iterations) + ',' + format_number(r.decreased_inst_pct) + '\n';
    }
    write_text(dir_ / "sweep.csv", text);
}

void OutputWriter::write_config(const ScenarioConfig& c) { write_text(dir_ / "config.json", config_to_json(c)); }

void OutputWriter::write_manifest(const RunManifest& m) { write_text(dir_ / "meta.json", manifest_json(m)); }

void OutputWriter::close() {
    for (std::ofstream* f : {&summary_, &per_ue_, &cdf_edge_inst_, &cdf_nonedge_inst_, &cdf_edge_avg_,
                             &cdf_nonedge_avg_, &per_tti_, &per_tti_network_}) {
        if (!f->is_open()) continue;
        f->flush();
        if (!*f) {
            throw IoError("write to " + dir_.string() + " failed");
        }
        f->close();
    }
}

}  // namespace nomacomp
