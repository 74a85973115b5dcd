#include "nomacomp/simulation.hpp"

#include <algorithm>
#include <numeric>

#include "nomacomp/errors.hpp"
#include "nomacomp/phy.hpp"
#include "nomacomp/scheduler.hpp"
#include "nomacomp/tti_evaluator.hpp"

namespace nomacomp {

struct Simulation::Impl {
    ScenarioConfig cfg;
    SimulationOptions opts;
    RandomStreams streams;
    LayoutResult net;
    std::vector<Ue> ues;
    std::vector<double> shadowing;
    PhyParams phy;
    GameParams game;
    Partition partition;
    PayoffState payoff;
    std::vector<char> prev_edge;
    int tti = 0;

    // Accumulators.
    double sum_all = 0.0;
    std::int64_t n_all = 0;
    double sum_edge = 0.0;
    double sum_edge_nc = 0.0;
    std::int64_t n_edge = 0;
    double sum_ne = 0.0;
    double sum_ne_nc = 0.0;
    std::int64_t n_ne = 0;
    std::int64_t dec_all = 0;
    std::int64_t dec_edge = 0;
    std::int64_t dec_ne = 0;
    std::int64_t df_breaches = 0;
    std::vector<double> ue_sum;
    std::vector<double> ue_sum_nc;
    std::vector<double> ue_edge_sum;
    std::vector<int> ue_edge_ttis;
    std::vector<double> edge_inst;
    std::vector<double> ne_inst;
    int activations = 0;
    std::int64_t iterations = 0;
    std::int64_t merge_tests = 0;
    double gated_per_rrh = 0.0;
    double coalition_size_sum = 0.0;
    double coalition_max_sum = 0.0;
    std::int64_t zf_regularized = 0;

    Impl(const ScenarioConfig& c, SimulationOptions o)
        : cfg(c),
          opts(std::move(o)),
          streams(c.seed),
          net(build_layout(c.rrh_count, c.circumradius_m, RrhParams{c.tx_power_w(), c.num_antennas, c.rrh_gain_dbi})) {
        ues = drop_ues(net.layout, net.rrhs, cfg.ues_per_cell, kmh_to_mps(cfg.ue_speed_kmh), cfg.ue_gain_dbi,
                       streams.topology());
        shadowing = draw_shadowing_map(static_cast<int>(ues.size()), cfg.rrh_count, cfg.shadow_std_db,
                                       streams.shadowing());
        phy.beam_power_w = beam_power(cfg.tx_power_w(), cfg.num_antennas, cfg.total_subcarriers());
        phy.noise_w = cfg.subcarrier_noise_w();
        phy.p_ftpc = cfg.p_ftpc;
        phy.zf_condition_limit = cfg.zf_condition_limit;
        phy.tti_s = cfg.tti_s;
        phy.tbs = cfg.tbs_params();
        phy.cqi = cfg.cqi_table();
        phy.averaging = cfg.sinr_averaging;
        game = GameParams{cfg.d_f, cfg.ci_threshold_db, cfg.max_coalition_size};
        payoff = PayoffState(cfg.rrh_count);
        switch (cfg.scheme) {
            case Scheme::sc_jt_comp:
                partition = static_clusters(net.rrhs, cfg.static_cluster_size);
                break;
            default:
                partition = Partition::singletons(cfg.rrh_count);
        }
        const std::size_t n = ues.size();
        prev_edge.assign(n, 0);
        ue_sum.assign(n, 0.0);
        ue_sum_nc.assign(n, 0.0);
        ue_edge_sum.assign(n, 0.0);
        ue_edge_ttis.assign(n, 0);
    }

    TtiReport step();
    RunSummary summary() const;
};

TtiReport Simulation::Impl::step() {
    TtiReport rep;
    rep.tti = tti;
    const int L = cfg.rrh_count;
    const int U = static_cast<int>(ues.size());

    if (tti > 0) advance_mobility(net.layout, ues, cfg.tti_s);
    const MacroLossTable macro =
        compute_macro_losses(net.layout, ues, net.rrhs, shadowing, cfg.pathloss, cfg.carrier_ghz);
    const std::vector<int> handovers = update_attachment(ues, macro.v_values(), L);
    rep.handovers = static_cast<int>(handovers.size());
    const ChannelRealization channels = realize_channels(macro, cfg.num_antennas, streams.fading());

    std::vector<int> serving(U);
    std::vector<std::vector<int>> attached(L);
    for (const Ue& u : ues) {
        serving[u.id] = u.serving_rrh;
        attached[u.serving_rrh].push_back(u.id);
    }
    std::vector<RbGrid> grids;
    grids.reserve(L);
    for (int l = 0; l < L; ++l) {
        grids.push_back(round_robin_schedule(attached[l], cfg.num_rbs, cfg.users_per_cluster * cfg.num_antennas,
                                             streams.scheduling()));
    }

    TtiEvaluator eval(channels, serving, grids, phy);
    rep.zf_regularized = eval.zf_regularized();
    const EdgeClassification ec = classify_edge_ues(eval.effective_sinr(), cfg.edge_fraction);
    for (int u = 0; u < U; ++u) {
        if (tti > 0 && (prev_edge[u] != 0) != (ec.is_edge[u] != 0)) ++rep.edge_flips;
        ues[u].is_edge = ec.is_edge[u] != 0;
    }
    eval.set_edge(ec.is_edge, ec.rank);
    bool trigger = reactivation_triggers(tti == 0, handovers, prev_edge, ec.is_edge);

    switch (cfg.scheme) {
        case Scheme::no_comp:
        case Scheme::sc_jt_comp:
            break;
        case Scheme::gc_jt_comp:
            if (trigger) {
                const GreedyResult g = greedy_clusters(eval, cfg.greedy_max_size, streams.greedy());
                partition = g.partition;
                rep.activated = true;
                rep.iterations = g.iterations;
            }
            break;
        case Scheme::game_jt_comp: {
            rep.dissolved = static_cast<int>(enforce_upkeep(partition, eval, cfg.d_f).size());
            if (rep.dissolved > 0) trigger = true;
            if (!trigger) break;
            const CiMatrix ci = build_ci_matrix(macro, serving, ec.is_edge);
            ActivationResult res = run_coalition_formation(partition, ci, eval, payoff, game);
            partition = res.partition;
            rep.activated = true;
            rep.iterations = res.iterations();
            rep.rounds = res.rounds;
            rep.merge_tests = res.merge_tests;
            rep.split_tests = res.split_tests;
            rep.merges_accepted = res.merges_accepted;
            rep.splits_accepted = res.splits_accepted;
            rep.size_rejections = res.size_rejections;
            rep.gated_entries = res.gated_entries;
            rep.accepted_ops = std::move(res.accepted);
            if (opts.check_stability) {
                rep.stable_admissible =
                    check_dhp_stable(partition, ci, eval, payoff, game, MoveSet::admissible).stable;
                if (opts.check_unrestricted) {
                    rep.stable_unrestricted =
                        check_dhp_stable(partition, ci, eval, payoff, game, MoveSet::unrestricted).stable;
                }
            }
            break;
        }
    }
    rep.partition = partition;

    const std::vector<double> tp = eval.partition_throughput(partition.coalitions());
    rep.ues.reserve(U);
    for (int u = 0; u < U; ++u) {
        UeTtiRecord r;
        r.ue = u;
        r.serving_rrh = serving[u];
        r.is_edge = ec.is_edge[u] != 0;
        r.effective_sinr = eval.effective_sinr()[u];
        r.throughput_bps = tp[u];
        r.no_comp_throughput_bps = eval.no_comp_throughput(u);
        r.scheduled_rbs = eval.scheduled_rbs()[u];
        rep.ues.push_back(r);

        sum_all += r.throughput_bps;
        ++n_all;
        ue_sum[u] += r.throughput_bps;
        ue_sum_nc[u] += r.no_comp_throughput_bps;
        const bool dec = r.throughput_bps < r.no_comp_throughput_bps;
        dec_all += dec;
        if (r.is_edge) {
            sum_edge += r.throughput_bps;
            sum_edge_nc += r.no_comp_throughput_bps;
            ++n_edge;
            dec_edge += dec;
            ue_edge_sum[u] += r.throughput_bps;
            ++ue_edge_ttis[u];
            edge_inst.push_back(r.throughput_bps);
        } else {
            sum_ne += r.throughput_bps;
            sum_ne_nc += r.no_comp_throughput_bps;
            ++n_ne;
            dec_ne += dec;
            if (r.throughput_bps < (1.0 - cfg.d_f) * r.no_comp_throughput_bps) ++df_breaches;
            ne_inst.push_back(r.throughput_bps);
        }
    }
    if (rep.activated) {
        ++activations;
        iterations += rep.iterations;
        merge_tests += rep.merge_tests;
        gated_per_rrh += static_cast<double>(rep.gated_entries) / L;
    }
    coalition_size_sum += partition.average_size();
    coalition_max_sum += partition.max_size();
    zf_regularized += rep.zf_regularized;
    prev_edge = ec.is_edge;
    ++tti;
    return rep;
}

RunSummary Simulation::Impl::summary() const {
    RunSummary s;
    s.scheme = cfg.scheme;
    s.seed = cfg.seed;
    s.rrh_count = cfg.rrh_count;
    s.ue_count = static_cast<int>(ues.size());
    s.ttis = tti;
    const auto mean = [](double sum, std::int64_t n) { return n > 0 ? sum / static_cast<double>(n) : 0.0; };
    const auto pct = [](std::int64_t k, std::int64_t n) { return n > 0 ? 100.0 * k / static_cast<double>(n) : 0.0; };
    s.mean_throughput_bps = mean(sum_all, n_all);
    s.mean_edge_throughput_bps = mean(sum_edge, n_edge);
    s.mean_nonedge_throughput_bps = mean(sum_ne, n_ne);
    s.mean_edge_no_comp_bps = mean(sum_edge_nc, n_edge);
    s.mean_nonedge_no_comp_bps = mean(sum_ne_nc, n_ne);

    const std::size_t n = ues.size();
    s.ue_avg_throughput_bps.resize(n);
    s.ue_avg_no_comp_bps.resize(n);
    s.ue_edge_fraction.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
        s.ue_avg_throughput_bps[u] = mean(ue_sum[u], tti);
        s.ue_avg_no_comp_bps[u] = mean(ue_sum_nc[u], tti);
        s.ue_edge_fraction[u] = mean(ue_edge_ttis[u], tti);
        if (ue_edge_ttis[u] > 0) s.cdf_edge_avg.push_back(ue_edge_sum[u] / ue_edge_ttis[u]);
        if (ue_edge_ttis[u] < tti) {
            s.cdf_nonedge_avg.push_back((ue_sum[u] - ue_edge_sum[u]) / (tti - ue_edge_ttis[u]));
        }
        if (tti == 0) continue;
        const double avg = s.ue_avg_throughput_bps[u];
        const double ref = s.ue_avg_no_comp_bps[u];
        if (avg > ref) {
            ++s.ues_increased;
        } else if (avg < ref) {
            ++s.ues_decreased;
            const double reduction = 100.0 * (1.0 - avg / ref);
            for (int b = 0; b < 5; ++b) {
                if (reduction > 10.0 * (b + 1)) ++s.reduced_more_than[b];
            }
        } else {
            ++s.ues_equal;
        }
    }
    s.cdf_edge_inst = edge_inst;
    s.cdf_nonedge_inst = ne_inst;
    std::sort(s.cdf_edge_inst.begin(), s.cdf_edge_inst.end());
    std::sort(s.cdf_nonedge_inst.begin(), s.cdf_nonedge_inst.end());
    std::sort(s.cdf_edge_avg.begin(), s.cdf_edge_avg.end());
    std::sort(s.cdf_nonedge_avg.begin(), s.cdf_nonedge_avg.end());

    s.decreased_inst_pct = pct(dec_all, n_all);
    s.decreased_inst_edge_pct = pct(dec_edge, n_edge);
    s.decreased_inst_nonedge_pct = pct(dec_ne, n_ne);
    s.nonedge_df_breaches = df_breaches;
    s.activations = activations;
    s.avg_iterations = mean(static_cast<double>(iterations), activations);
    s.avg_merge_tests = mean(static_cast<double>(merge_tests), activations);
    s.avg_gated_per_rrh = mean(gated_per_rrh, activations);
    s.avg_coalition_size = mean(coalition_size_sum, tti);
    s.avg_max_coalition_size = mean(coalition_max_sum, tti);
    s.zf_regularized = zf_regularized;
    s.shared_stream_digest = streams.shared_digest();
    return s;
}

Simulation::Simulation(const ScenarioConfig& config, SimulationOptions options) {
    config.validate();
    impl_ = std::make_unique<Impl>(config, std::move(options));
}

Simulation::~Simulation() = default;
Simulation::Simulation(Simulation&&) noexcept = default;
Simulation& Simulation::operator=(Simulation&&) noexcept = default;

bool Simulation::done() const { return impl_->tti >= impl_->cfg.ttis; }
int Simulation::current_tti() const { return impl_->tti; }

TtiReport Simulation::step() {
    if (done()) {
        throw InvalidInput("simulation already ran all TTIs");
    }
    TtiReport r = impl_->step();
    if (impl_->opts.on_tti) impl_->opts.on_tti(r);
    return r;
}

RunSummary Simulation::summary() const { return impl_->summary(); }
const ScenarioConfig& Simulation::config() const { return impl_->cfg; }
const std::vector<Rrh>& Simulation::rrhs() const { return impl_->net.rrhs; }
const std::vector<Ue>& Simulation::ues() const { return impl_->ues; }
const Partition& Simulation::partition() const { return impl_->partition; }
const HexLayout& Simulation::layout() const { return impl_->net.layout; }
std::uint64_t Simulation::shared_stream_digest() const { return impl_->streams.shared_digest(); }

RunResult run_simulation(const ScenarioConfig& config, const SimulationOptions& options) {
    Simulation sim(config, options);
    RunResult out;
    out.config = config;
    while (!sim.done()) {
        TtiReport r = sim.step();
        if (options.keep_reports) out.reports.push_back(std::move(r));
    }
    out.summary = sim.summary();
    return out;
}

std::vector<RunResult> paired_comparison(const ScenarioConfig& config, std::span<const Scheme> schemes,
                                         const SimulationOptions& options) {
    if (schemes.size() < 2) {
        throw ConfigError("a paired comparison needs at least two schemes");
    }
    std::vector<RunResult> out;
    for (const Scheme s : schemes) {
        ScenarioConfig c = config;
        c.scheme = s;
        out.push_back(run_simulation(c, options));
    }
    return out;
}

std::vector<SweepRow> sweep(const ScenarioConfig& base, const std::string& axis, std::span<const double> values,
                            int runs) {
    if (runs < 1) {
        throw ConfigError("a sweep needs at least one run per value");
    }
    std::vector<SweepRow> rows;
    for (const double v : values) {
        SweepRow row;
        row.axis = axis;
        row.value = v;
        row.scheme = base.scheme;
        row.runs = runs;
        const ScenarioConfig point = with_axis(base, axis, v);
        for (int r = 0; r < runs; ++r) {
            ScenarioConfig c = point;
            c.seed = base.seed + static_cast<std::uint64_t>(r);
            const RunSummary s = run_simulation(c).summary;
            row.mean_throughput_bps += s.mean_throughput_bps / runs;
            row.mean_edge_throughput_bps += s.mean_edge_throughput_bps / runs;
            row.mean_nonedge_throughput_bps += s.mean_nonedge_throughput_bps / runs;
            row.avg_coalition_size += s.avg_coalition_size / runs;
            row.avg_max_coalition_size += s.avg_max_coalition_size / runs;
            row.avg_iterations += s.avg_iterations / runs;
            row.decreased_inst_pct += s.decreased_inst_pct / runs;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace nomacomp
