#pragma once

#include <span>
#include <vector>

#include "nomacomp/rng.hpp"

namespace nomacomp {

/// One RRH's scheduling decision for a TTI.
struct RbGrid {
    int num_rbs = 0;
    int group_size = 0;                   ///< min(K*N, attached UEs)
    std::vector<std::vector<int>> groups;  ///< per RB, distinct UE ids

    /// Number of RBs on which each id of `ues` is scheduled.
    std::vector<int> counts(std::span<const int> ues) const;
};

/// Round robin over a fresh random permutation of `rrh_ues`: RB r takes
/// entries [r*g, (r+1)*g) of the endlessly repeated permutation, with
/// g = min(max_group, |rrh_ues|) so no UE appears twice in one RB. No
/// attached UEs gives an empty grid.
RbGrid round_robin_schedule(std::span<const int> rrh_ues, int num_rbs, int max_group, TracedEngine& rng);

}  // namespace nomacomp
