#include "nomacomp/tti_evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nomacomp/errors.hpp"

namespace nomacomp {

namespace {

struct Member {
    int ue;
    int local;  ///< slot index within the RB list
    bool joined;
};

}  // namespace

TtiEvaluator::TtiEvaluator(const ChannelRealization& channels, std::span<const int> serving,
                           std::span<const RbGrid> grids, const PhyParams& params)
    : params_(params),
      channels_(&channels),
      rrh_count_(channels.rrh_count()),
      ue_count_(channels.ue_count()),
      antennas_(channels.antennas()),
      serving_(serving.begin(), serving.end()) {
    if (static_cast<int>(serving.size()) != ue_count_) {
        throw InvalidInput("serving map must cover every UE");
    }
    if (static_cast<int>(grids.size()) != rrh_count_) {
        throw InvalidInput("one scheduling grid per RRH is required");
    }
    for (const RbGrid& g : grids) num_rbs_ = std::max(num_rbs_, g.num_rbs);
    for (int c = 0; c <= CqiTable::kRows; ++c) tbs_by_cqi_[c] = per_rb_tbs(params_.cqi, c, params_.tbs);

    rrh_ues_.assign(rrh_count_, {});
    for (int u = 0; u < ue_count_; ++u) rrh_ues_[serving_[u]].push_back(u);

    allocations_.resize(static_cast<std::size_t>(rrh_count_) * num_rbs_);
    has_allocation_.assign(allocations_.size(), 0);
    std::vector<Eigen::RowVectorXcd> group_channels;
    for (int l = 0; l < rrh_count_; ++l) {
        for (int r = 0; r < static_cast<int>(grids[l].groups.size()); ++r) {
            const auto& group = grids[l].groups[r];
            if (group.empty()) continue;
            group_channels.clear();
            for (const int u : group) group_channels.emplace_back(channels.h(u, l));
            RbAllocation& a = allocations_[static_cast<std::size_t>(l) * num_rbs_ + r];
            has_allocation_[static_cast<std::size_t>(l) * num_rbs_ + r] = 1;
            a.rrh = l;
            a.rb = r;
            const auto pairs = pair_noma_users(group, group_channels);
            Eigen::MatrixXcd h(static_cast<Eigen::Index>(pairs.size()), antennas_);
            for (std::size_t n = 0; n < pairs.size(); ++n) {
                h.row(static_cast<Eigen::Index>(n)) = channels.h(pairs[n].strong, l);
                a.strong.push_back(pairs[n].strong);
            }
            a.beams = zf_beamformers(h, params_.zf_condition_limit);
            if (a.beams.regularized) ++zf_regularized_;
            for (std::size_t n = 0; n < pairs.size(); ++n) {
                NomaCluster c;
                c.rrh = l;
                c.beam = static_cast<int>(n);
                c.members.push_back(pairs[n].strong);
                if (pairs[n].weak >= 0) c.members.push_back(pairs[n].weak);
                std::sort(c.members.begin(), c.members.end(), [&](int x, int y) {
                    const double gx = channels.gain(x, l);
                    const double gy = channels.gain(y, l);
                    return gx != gy ? gx < gy : x < y;
                });
                std::vector<double> g;
                for (const int u : c.members) g.push_back(channels.gain(u, l));
                c.power_coeffs = ftpc_coefficients(g, params_.p_ftpc);
                a.clusters.push_back(std::move(c));
            }
        }
    }

    rb_slots_.assign(num_rbs_, {});
    cluster_base_.assign(allocations_.size() * antennas_, -1);
    ue_slots_.assign(ue_count_, {});
    for (int r = 0; r < num_rbs_; ++r) {
        for (int l = 0; l < rrh_count_; ++l) {
            const RbAllocation* a = allocation(l, r);
            if (a == nullptr) continue;
            for (const NomaCluster& c : a->clusters) {
                cluster_base_[(static_cast<std::size_t>(l) * num_rbs_ + r) * antennas_ + c.beam] =
                    static_cast<int>(rb_slots_[r].size());
                for (int k = 0; k < static_cast<int>(c.members.size()); ++k) {
                    const int s = static_cast<int>(slots_.size());
                    slots_.push_back(Slot{c.members[k], l, r, c.beam, k});
                    slot_local_.push_back(static_cast<int>(rb_slots_[r].size()));
                    rb_slots_[r].push_back(s);
                    ue_slots_[c.members[k]].push_back(s);
                }
            }
        }
    }

    const std::size_t stride = static_cast<std::size_t>(rrh_count_) * antennas_;
    gains_.assign(slots_.size() * stride, 0.0);
    comp_beam_.assign(slots_.size() * rrh_count_, -1);
    std::vector<Eigen::RowVectorXcd> strong_channels;
    for (std::size_t s = 0; s < slots_.size(); ++s) {
        const Slot& sl = slots_[s];
        for (int j = 0; j < rrh_count_; ++j) {
            const RbAllocation* a = allocation(j, sl.rb);
            if (a == nullptr) continue;
            const auto h = channels.h(sl.ue, j);
            for (Eigen::Index n = 0; n < a->beams.w.cols(); ++n) {
                gains_[s * stride + j * antennas_ + n] = std::norm((h * a->beams.w.col(n))(0));
            }
            if (j != sl.rrh) {
                strong_channels.clear();
                for (const int st : a->strong) strong_channels.emplace_back(channels.h(st, j));
                comp_beam_[s * rrh_count_ + j] = best_comp_beam(h, strong_channels);
            }
        }
    }

    no_comp_sinr_.resize(slots_.size());
    for (std::size_t s = 0; s < slots_.size(); ++s) {
        const Slot& sl = slots_[s];
        const NomaCluster& c = allocation(sl.rrh, sl.rb)->clusters[sl.beam];
        ClusterSlot cs{sl.rrh, sl.beam, c.power_coeffs[sl.position], 0.0};
        for (std::size_t k = sl.position + 1; k < c.power_coeffs.size(); ++k) cs.coeff_after += c.power_coeffs[k];
        no_comp_sinr_[s] = sinr_no_comp(gains(static_cast<int>(s)), cs, params_.beam_power_w, params_.noise_w);
    }

    no_comp_tp_.assign(ue_count_, 0.0);
    effective_sinr_.assign(ue_count_, 0.0);
    scheduled_rbs_.assign(ue_count_, 0);
    std::vector<double> sinrs;
    for (int u = 0; u < ue_count_; ++u) {
        no_comp_tp_[u] = throughput_of(ue_slots_[u], no_comp_sinr_);
        scheduled_rbs_[u] = static_cast<int>(ue_slots_[u].size());
        if (ue_slots_[u].empty()) continue;
        sinrs.clear();
        for (const int s : ue_slots_[u]) sinrs.push_back(no_comp_sinr_[s].sinr);
        effective_sinr_[u] = nomacomp::effective_sinr(sinrs, params_.averaging);
    }
    is_edge_.assign(ue_count_, 0);
    edge_rank_.assign(ue_count_, -1);
}

const RbAllocation* TtiEvaluator::allocation(int rrh, int rb) const {
    const std::size_t i = static_cast<std::size_t>(rrh) * num_rbs_ + rb;
    return has_allocation_[i] ? &allocations_[i] : nullptr;
}

void TtiEvaluator::set_edge(std::span<const char> is_edge, std::span<const int> edge_rank) {
    if (static_cast<int>(is_edge.size()) != ue_count_ || static_cast<int>(edge_rank.size()) != ue_count_) {
        throw InvalidInput("edge flags and ranks must cover every UE");
    }
    is_edge_.assign(is_edge.begin(), is_edge.end());
    edge_rank_.assign(edge_rank.begin(), edge_rank.end());
    cache_.clear();
}

double TtiEvaluator::throughput_of(std::span<const int> slot_ids, std::span<const SinrBreakdown> sinrs) const {
    std::int64_t bits = 0;
    for (const int s : slot_ids) bits += tbs_by_cqi_[params_.cqi.cqi_for(sinrs[s].sinr)];
    return static_cast<double>(bits) / params_.tti_s;
}

void TtiEvaluator::evaluate(Mask coalition, std::vector<SinrBreakdown>& out) const {
    out.resize(slots_.size());
    if (mask_size(coalition) <= 1) {
        for (std::size_t s = 0; s < slots_.size(); ++s) {
            if (coalition & bit(slots_[s].rrh)) out[s] = no_comp_sinr_[s];
        }
        return;
    }
    std::vector<char> in_coalition(rrh_count_, 0);
    for (int l = 0; l < rrh_count_; ++l) in_coalition[l] = (coalition & bit(l)) ? 1 : 0;

    std::vector<ClusterSlot> serving_slot;
    std::vector<std::vector<ClusterSlot>> cooperating;
    std::vector<int> edges;
    std::vector<Member> members;
    std::vector<double> member_gains;
    for (int r = 0; r < num_rbs_; ++r) {
        const auto& list = rb_slots_[r];
        serving_slot.assign(list.size(), ClusterSlot{});
        cooperating.assign(list.size(), {});
        edges.clear();
        for (const int s : list) {
            if (in_coalition[slots_[s].rrh] && is_edge_[slots_[s].ue]) edges.push_back(s);
        }
        for (int j = 0; j < rrh_count_; ++j) {
            if (!in_coalition[j]) continue;
            const RbAllocation* a = allocation(j, r);
            if (a == nullptr) continue;
            for (const NomaCluster& c : a->clusters) {
                members.clear();
                const int base = cluster_base_[(static_cast<std::size_t>(j) * num_rbs_ + r) * antennas_ + c.beam];
                for (int k = 0; k < static_cast<int>(c.members.size()); ++k) {
                    members.push_back(Member{c.members[k], base + k, false});
                }
                for (const int e : edges) {
                    if (slots_[e].rrh != j && comp_beam_[static_cast<std::size_t>(e) * rrh_count_ + j] == c.beam) {
                        members.push_back(Member{slots_[e].ue, slot_local_[e], true});
                    }
                }
                std::sort(members.begin(), members.end(), [&](const Member& x, const Member& y) {
                    const bool ex = is_edge_[x.ue] != 0;
                    const bool ey = is_edge_[y.ue] != 0;
                    if (ex != ey) return ex;
                    if (ex) return edge_rank_[x.ue] < edge_rank_[y.ue];
                    const double gx = channels_->gain(x.ue, j);
                    const double gy = channels_->gain(y.ue, j);
                    return gx != gy ? gx < gy : x.ue < y.ue;
                });
                member_gains.clear();
                for (const Member& m : members) member_gains.push_back(channels_->gain(m.ue, j));
                const auto coeffs = ftpc_coefficients(member_gains, params_.p_ftpc);
                for (std::size_t k = 0; k < members.size(); ++k) {
                    double tail = 0.0;
                    for (std::size_t q = k + 1; q < coeffs.size(); ++q) tail += coeffs[q];
                    const ClusterSlot cs{j, c.beam, coeffs[k], tail};
                    if (members[k].joined) {
                        cooperating[members[k].local].push_back(cs);
                    } else {
                        serving_slot[members[k].local] = cs;
                    }
                }
            }
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            const int s = list[i];
            const Slot& sl = slots_[s];
            if (!in_coalition[sl.rrh]) continue;
            if (is_edge_[sl.ue]) {
                out[s] = sinr_comp(gains(s), serving_slot[i], cooperating[i], in_coalition, params_.beam_power_w,
                                   params_.noise_w);
            } else {
                out[s] = sinr_no_comp(gains(s), serving_slot[i], params_.beam_power_w, params_.noise_w);
            }
        }
    }
}

const std::vector<double>& TtiEvaluator::coalition_throughput(Mask coalition) {
    if (const auto it = cache_.find(coalition); it != cache_.end()) {
        return it->second;
    }
    std::vector<double> tp(ue_count_, std::numeric_limits<double>::quiet_NaN());
    if (mask_size(coalition) <= 1) {
        for (int l = 0; l < rrh_count_; ++l) {
            if (!(coalition & bit(l))) continue;
            for (const int u : rrh_ues_[l]) tp[u] = no_comp_tp_[u];
        }
    } else {
        std::vector<SinrBreakdown> sinrs;
        evaluate(coalition, sinrs);
        for (int l = 0; l < rrh_count_; ++l) {
            if (!(coalition & bit(l))) continue;
            for (const int u : rrh_ues_[l]) tp[u] = throughput_of(ue_slots_[u], sinrs);
        }
    }
    return cache_.emplace(coalition, std::move(tp)).first->second;
}

std::vector<double> TtiEvaluator::partition_throughput(std::span<const Mask> partition) {
    std::vector<double> out(ue_count_, 0.0);
    Mask covered = 0;
    for (const Mask m : partition) {
        if (m & covered) throw InvalidInput("partition coalitions overlap");
        covered |= m;
        const auto& tp = coalition_throughput(m);
        for (int l = 0; l < rrh_count_; ++l) {
            if (!(m & bit(l))) continue;
            for (const int u : rrh_ues_[l]) out[u] = tp[u];
        }
    }
    const Mask all = rrh_count_ == 64 ? ~Mask{0} : (bit(rrh_count_) - 1);
    if (covered != all) throw InvalidInput("partition does not cover every RRH");
    return out;
}

std::vector<SinrBreakdown> TtiEvaluator::slot_sinrs(Mask coalition) const {
    std::vector<SinrBreakdown> out;
    evaluate(coalition, out);
    return out;
}

}  // namespace nomacomp
