#pragma once

#include <span>

#include "nomacomp/coalition_game.hpp"
#include "nomacomp/rng.hpp"
#include "nomacomp/topology.hpp"

namespace nomacomp {

/// Distance-only grouping: the unassigned RRH farthest from the centroid of
/// all RRHs (ties to the lower id) joins its cluster_size - 1 nearest
/// unassigned RRHs; repeat until all are assigned.
Partition static_clusters(std::span<const Rrh> rrhs, int cluster_size);

struct GreedyResult {
    Partition partition;
    int iterations = 0;  ///< subsets evaluated
};

/// From all singletons: a random unassigned anchor takes the subset of
/// unassigned RRHs (containing it, at most max_size) with the largest edge-UE
/// sum throughput, ties to the lexicographically smallest id set.
GreedyResult greedy_clusters(CoalitionEvaluator& eval, int max_size, TracedEngine& rng);

Partition no_comp_baseline(int rrh_count);

}  // namespace nomacomp
