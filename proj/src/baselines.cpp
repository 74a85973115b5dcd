#include "nomacomp/baselines.hpp"

#include <algorithm>
#include <random>

#include "nomacomp/errors.hpp"

namespace nomacomp {

Partition static_clusters(std::span<const Rrh> rrhs, int cluster_size) {
    if (cluster_size < 1) {
        throw InvalidInput("static cluster size must be >= 1");
    }
    const int n = static_cast<int>(rrhs.size());
    Vec2 centroid;
    for (const Rrh& r : rrhs) centroid += r.position;
    if (n > 0) centroid = centroid * (1.0 / n);

    std::vector<char> assigned(n, 0);
    std::vector<Mask> coalitions;
    for (int left = n; left > 0;) {
        int anchor = -1;
        double far = -1.0;
        for (int i = 0; i < n; ++i) {
            if (assigned[i]) continue;
            const double d = (rrhs[i].position - centroid).norm();
            if (d > far + 1e-9) {
                far = d;
                anchor = i;
            }
        }
        std::vector<int> others;
        for (int i = 0; i < n; ++i) {
            if (!assigned[i] && i != anchor) others.push_back(i);
        }
        std::stable_sort(others.begin(), others.end(), [&](int a, int b) {
            return (rrhs[a].position - rrhs[anchor].position).norm() <
                   (rrhs[b].position - rrhs[anchor].position).norm();
        });
        Mask m = bit(rrhs[anchor].id);
        assigned[anchor] = 1;
        for (int k = 0; k < cluster_size - 1 && k < static_cast<int>(others.size()); ++k) {
            m |= bit(rrhs[others[k]].id);
            assigned[others[k]] = 1;
        }
        left -= mask_size(m);
        coalitions.push_back(m);
    }
    return Partition(std::move(coalitions));
}

namespace {

double edge_sum(CoalitionEvaluator& eval, Mask s) {
    const auto& tp = eval.coalition_throughput(s);
    double sum = 0.0;
    for (int u = 0; u < eval.ue_count(); ++u) {
        if ((s & bit(eval.serving_rrh(u))) && eval.is_edge(u)) sum += tp[u];
    }
    return sum;
}

// Sorted member ids compare lexicographically; the lowest differing member decides.
bool lex_less(Mask a, Mask b) {
    while (a != 0 && b != 0) {
        const int x = lowest_member(a);
        const int y = lowest_member(b);
        if (x != y) return x < y;
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

}  // namespace

GreedyResult greedy_clusters(CoalitionEvaluator& eval, int max_size, TracedEngine& rng) {
    if (max_size < 1) {
        throw InvalidInput("greedy maximum size must be >= 1");
    }
    GreedyResult out;
    std::vector<int> unassigned(eval.rrh_count());
    for (int l = 0; l < eval.rrh_count(); ++l) unassigned[l] = l;
    std::vector<Mask> coalitions;
    while (!unassigned.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, unassigned.size() - 1);
        const int anchor = unassigned[pick(rng)];
        std::vector<int> pool;
        for (const int l : unassigned) {
            if (l != anchor) pool.push_back(l);
        }
        Mask best = bit(anchor);
        double best_sum = -1.0;
        std::vector<int> chosen;
        const auto rec = [&](auto&& self, std::size_t from) -> void {
            Mask s = bit(anchor);
            for (const int c : chosen) s |= bit(c);
            ++out.iterations;
            const double v = edge_sum(eval, s);
            if (v > best_sum || (v == best_sum && lex_less(s, best))) {
                best_sum = v;
                best = s;
            }
            if (static_cast<int>(chosen.size()) + 1 >= max_size) return;
            for (std::size_t i = from; i < pool.size(); ++i) {
                chosen.push_back(pool[i]);
                self(self, i + 1);
                chosen.pop_back();
            }
        };
        rec(rec, 0);
        coalitions.push_back(best);
        std::erase_if(unassigned, [&](int l) { return (best & bit(l)) != 0; });
    }
    out.partition = Partition(std::move(coalitions));
    return out;
}

Partition no_comp_baseline(int rrh_count) { return Partition::singletons(rrh_count); }

}  // namespace nomacomp
