#include "nomacomp/scheduler.hpp"

#include <algorithm>
#include <random>

#include "nomacomp/errors.hpp"

namespace nomacomp {

std::vector<int> RbGrid::counts(std::span<const int> ues) const {
    std::vector<int> out(ues.size(), 0);
    for (const auto& g : groups) {
        for (const int id : g) {
            const auto it = std::find(ues.begin(), ues.end(), id);
            if (it != ues.end()) ++out[it - ues.begin()];
        }
    }
    return out;
}

RbGrid round_robin_schedule(std::span<const int> rrh_ues, int num_rbs, int max_group, TracedEngine& rng) {
    if (num_rbs < 1 || max_group < 1) {
        throw InvalidInput("scheduler needs at least one RB and a positive group size");
    }
    RbGrid grid;
    grid.num_rbs = num_rbs;
    if (rrh_ues.empty()) {
        return grid;
    }
    std::vector<int> seq(rrh_ues.begin(), rrh_ues.end());
    std::sort(seq.begin(), seq.end());
    std::shuffle(seq.begin(), seq.end(), rng);

    const std::size_t n = seq.size();
    grid.group_size = static_cast<int>(std::min<std::size_t>(max_group, n));
    grid.groups.resize(num_rbs);
    std::size_t cursor = 0;
    for (auto& g : grid.groups) {
        g.reserve(grid.group_size);
        for (int k = 0; k < grid.group_size; ++k) {
            g.push_back(seq[cursor]);
            cursor = (cursor + 1) % n;
        }
    }
    return grid;
}

}  // namespace nomacomp
