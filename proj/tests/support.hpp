#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "nomacomp/coalition_evaluator.hpp"
#include "nomacomp/rng.hpp"

namespace nomacomp::test {

/// Coalition throughputs from an explicit table, falling back to a function
/// of (mask, ue); singletons always return the no-cooperation values.
class TableEvaluator final : public CoalitionEvaluator {
  public:
    using Fn = std::function<double(Mask, int)>;

    TableEvaluator(int rrh_count, std::vector<int> serving, std::vector<char> edge, std::vector<double> no_comp)
        : rrh_count_(rrh_count), serving_(std::move(serving)), edge_(std::move(edge)), no_comp_(std::move(no_comp)) {}

    int rrh_count() const override { return rrh_count_; }
    int ue_count() const override { return static_cast<int>(serving_.size()); }
    int serving_rrh(int ue) const override { return serving_[ue]; }
    bool is_edge(int ue) const override { return edge_[ue] != 0; }
    double no_comp_throughput(int ue) const override { return no_comp_[ue]; }

    const std::vector<double>& coalition_throughput(Mask coalition) override {
        auto it = cache_.find(coalition);
        if (it != cache_.end()) return it->second;
        std::vector<double> tp(serving_.size(), 0.0);
        const auto fixed = table.find(coalition);
        for (int u = 0; u < ue_count(); ++u) {
            if (!(coalition & bit(serving_[u]))) continue;
            if (fixed != table.end()) {
                tp[u] = fixed->second[u];
            } else if (mask_size(coalition) == 1 || !fallback) {
                tp[u] = no_comp_[u];
            } else {
                tp[u] = fallback(coalition, u);
            }
        }
        ++evaluations;
        return cache_.emplace(coalition, std::move(tp)).first->second;
    }

    std::map<Mask, std::vector<double>> table;
    Fn fallback;
    int evaluations = 0;

  private:
    int rrh_count_;
    std::vector<int> serving_;
    std::vector<char> edge_;
    std::vector<double> no_comp_;
    std::map<Mask, std::vector<double>> cache_;
};

/// Uniform in [0, 1) from a hash of (seed, mask, ue); stable across calls.
inline double hashed_unit(std::uint64_t seed, Mask m, int ue) {
    const std::uint64_t x = splitmix64(seed ^ splitmix64(m ^ splitmix64(static_cast<std::uint64_t>(ue) + 17)));
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace nomacomp::test
