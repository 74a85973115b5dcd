#pragma once

#include <array>
#include <span>
#include <unordered_map>
#include <vector>

#include "nomacomp/channel.hpp"
#include "nomacomp/coalition_evaluator.hpp"
#include "nomacomp/link_adaptation.hpp"
#include "nomacomp/phy.hpp"
#include "nomacomp/scheduler.hpp"

namespace nomacomp {

struct PhyParams {
    double beam_power_w = 0.0;
    double noise_w = 0.0;
    double p_ftpc = 0.4;
    double zf_condition_limit = 1e6;
    double tti_s = 1e-3;
    TbsParams tbs;
    CqiTable cqi = CqiTable::nr_256qam();
    SinrAveraging averaging = SinrAveraging::linear;
};

/// One NOMA cluster before cooperation. Members in decode order (ascending
/// gain toward the RRH).
struct NomaCluster {
    int rrh = 0;
    int beam = 0;
    std::vector<int> members;
    std::vector<double> power_coeffs;
};

/// One RRH on one RB.
struct RbAllocation {
    int rrh = 0;
    int rb = 0;
    BeamSet beams;
    std::vector<int> strong;  ///< strong user per beam
    std::vector<NomaCluster> clusters;
};

/// A UE scheduled on one RB by its serving RRH.
struct Slot {
    int ue = 0;
    int rrh = 0;
    int rb = 0;
    int beam = 0;
    int position = 0;  ///< pre-cooperation decode position in the cluster
};

/// Everything about one TTI once channels and schedules are fixed: beams,
/// clusters, per-RB beam gains, the no-cooperation reference and, after
/// set_edge, throughputs for any coalition (memoized per mask).
class TtiEvaluator final : public CoalitionEvaluator {
  public:
    /// `grids[l]` is RRH l's schedule; `serving[u]` the RRH of UE u.
    /// `channels` must outlive the evaluator.
    TtiEvaluator(const ChannelRealization& channels, std::span<const int> serving, std::span<const RbGrid> grids,
                 const PhyParams& params);

    int rrh_count() const override { return rrh_count_; }
    int ue_count() const override { return ue_count_; }
    int serving_rrh(int ue) const override { return serving_[ue]; }
    bool is_edge(int ue) const override { return is_edge_[ue] != 0; }
    double no_comp_throughput(int ue) const override { return no_comp_tp_[ue]; }
    const std::vector<double>& coalition_throughput(Mask coalition) override;

    int num_rbs() const { return num_rbs_; }
    int antennas() const { return antennas_; }
    const std::vector<Slot>& slots() const { return slots_; }
    /// nullptr when the RRH schedules nobody on the RB.
    const RbAllocation* allocation(int rrh, int rb) const;
    int zf_regularized() const { return zf_regularized_; }

    const std::vector<double>& no_comp_throughputs() const { return no_comp_tp_; }
    /// Mean scheduled-RB SINR without cooperation; 0 for an unscheduled UE.
    const std::vector<double>& effective_sinr() const { return effective_sinr_; }
    const std::vector<int>& scheduled_rbs() const { return scheduled_rbs_; }

    /// Edge flags and the global edge decode order (rank among edge UEs).
    /// Clears the coalition cache.
    void set_edge(std::span<const char> is_edge, std::span<const int> edge_rank);

    /// Throughput of every UE under a partition (masks covering all RRHs).
    std::vector<double> partition_throughput(std::span<const Mask> partition);

    /// Per-slot SINR terms, for slots of RRHs in `coalition`; other entries
    /// are left default.
    std::vector<SinrBreakdown> slot_sinrs(Mask coalition) const;

    /// Gains |h w|^2 seen by a slot's UE on its RB from every RRH and beam.
    GainView gains(int slot) const {
        return {gains_.data() + static_cast<std::size_t>(slot) * rrh_count_ * antennas_, rrh_count_, antennas_};
    }

    /// Distinct coalitions evaluated since the last set_edge.
    std::size_t evaluations() const { return cache_.size(); }

  private:
    void evaluate(Mask coalition, std::vector<SinrBreakdown>& out) const;
    double throughput_of(std::span<const int> slot_ids, std::span<const SinrBreakdown> sinrs) const;

    PhyParams params_;
    const ChannelRealization* channels_;
    int rrh_count_;
    int ue_count_;
    int num_rbs_ = 0;
    int antennas_;
    int zf_regularized_ = 0;
    std::vector<int> serving_;
    std::vector<RbAllocation> allocations_;  ///< rrh-major, num_rbs per RRH
    std::vector<char> has_allocation_;
    std::vector<Slot> slots_;
    std::vector<std::vector<int>> rb_slots_;
    std::vector<std::vector<int>> ue_slots_;
    std::vector<std::vector<int>> rrh_ues_;
    std::vector<int> slot_local_;    ///< index of a slot within its RB's list
    std::vector<int> cluster_base_;  ///< (rrh, rb, beam) -> local index of its first member
    std::vector<double> gains_;      ///< slot x rrh x beam
    std::vector<int> comp_beam_;     ///< slot x rrh, -1 without beams
    std::vector<SinrBreakdown> no_comp_sinr_;
    std::vector<double> no_comp_tp_;
    std::vector<double> effective_sinr_;
    std::vector<int> scheduled_rbs_;
    std::vector<char> is_edge_;
    std::vector<int> edge_rank_;
    std::array<std::int64_t, CqiTable::kRows + 1> tbs_by_cqi_{};
    std::unordered_map<Mask, std::vector<double>> cache_;
};

}  // namespace nomacomp
