#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace nomacomp {

/// RRH set, bit l set when RRH l is a member.
using Mask = std::uint64_t;

inline Mask bit(int rrh) { return Mask{1} << rrh; }
inline int mask_size(Mask m) { return std::popcount(m); }
inline int lowest_member(Mask m) { return std::countr_zero(m); }

/// What the clustering schemes need from one TTI. Throughputs of a
/// coalition's UEs depend on its members only, so results are keyed by mask.
class CoalitionEvaluator {
  public:
    virtual ~CoalitionEvaluator() = default;

    virtual int rrh_count() const = 0;
    virtual int ue_count() const = 0;
    virtual int serving_rrh(int ue) const = 0;
    virtual bool is_edge(int ue) const = 0;
    virtual double no_comp_throughput(int ue) const = 0;

    /// Per-UE throughput in bps with the RRHs of `coalition` cooperating.
    /// Entries are meaningful only for UEs served by members.
    virtual const std::vector<double>& coalition_throughput(Mask coalition) = 0;
};

}  // namespace nomacomp
