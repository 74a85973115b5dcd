#include "nomacomp/coalition_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "nomacomp/errors.hpp"

namespace nomacomp {

Partition::Partition(std::vector<Mask> coalitions) : coalitions_(std::move(coalitions)) { normalize(); }

Partition Partition::singletons(int rrh_count) {
    std::vector<Mask> c;
    for (int l = 0; l < rrh_count; ++l) c.push_back(bit(l));
    return Partition(std::move(c));
}

void Partition::normalize() {
    std::erase(coalitions_, Mask{0});
    std::sort(coalitions_.begin(), coalitions_.end(),
              [](Mask a, Mask b) { return lowest_member(a) < lowest_member(b); });
}

Mask Partition::coalition_of(int rrh) const {
    for (const Mask m : coalitions_) {
        if (m & bit(rrh)) return m;
    }
    throw InvalidInput("RRH " + std::to_string(rrh) + " is in no coalition");
}

bool Partition::valid(int rrh_count, int max_size) const {
    Mask seen = 0;
    for (const Mask m : coalitions_) {
        if (m == 0 || (m & seen) || mask_size(m) > max_size) return false;
        seen |= m;
    }
    const Mask all = rrh_count == 64 ? ~Mask{0} : bit(rrh_count) - 1;
    return seen == all;
}

void Partition::merge(Mask a, Mask b) {
    const auto ia = std::find(coalitions_.begin(), coalitions_.end(), a);
    const auto ib = std::find(coalitions_.begin(), coalitions_.end(), b);
    if (ia == coalitions_.end() || ib == coalitions_.end() || a == b) {
        throw InvalidInput("merge needs two distinct coalitions of the partition");
    }
    *ia = a | b;
    *ib = 0;
    normalize();
}

void Partition::split(Mask coalition, int member) {
    const auto it = std::find(coalitions_.begin(), coalitions_.end(), coalition);
    if (it == coalitions_.end() || !(coalition & bit(member)) || mask_size(coalition) < 2) {
        throw InvalidInput("split needs a member of a non-singleton coalition");
    }
    *it = coalition & ~bit(member);
    coalitions_.push_back(bit(member));
    normalize();
}

void Partition::dissolve(Mask coalition) {
    const auto it = std::find(coalitions_.begin(), coalitions_.end(), coalition);
    if (it == coalitions_.end()) {
        throw InvalidInput("dissolve needs a coalition of the partition");
    }
    *it = 0;
    for (Mask m = coalition; m != 0; m &= m - 1) coalitions_.push_back(bit(lowest_member(m)));
    normalize();
}

double Partition::average_size() const {
    if (coalitions_.empty()) return 0.0;
    int total = 0;
    for (const Mask m : coalitions_) total += mask_size(m);
    return static_cast<double>(total) / static_cast<double>(coalitions_.size());
}

int Partition::max_size() const {
    int best = 0;
    for (const Mask m : coalitions_) best = std::max(best, mask_size(m));
    return best;
}

std::string Partition::to_string() const {
    std::ostringstream os;
    for (const Mask m : coalitions_) {
        os << '{';
        bool first = true;
        for (Mask x = m; x != 0; x &= x - 1) {
            if (!first) os << ',';
            os << lowest_member(x);
            first = false;
        }
        os << '}';
    }
    return os.str();
}

int sgn(double b, double a) { return b < a ? -1 : (b > a ? 1 : 0); }

int edge_count(int ue_count, double edge_fraction) {
    return static_cast<int>(std::floor(edge_fraction * ue_count + 1e-9));
}

EdgeClassification classify_edge_ues(std::span<const double> effective_sinrs, double edge_fraction) {
    const int n = static_cast<int>(effective_sinrs.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return effective_sinrs[a] < effective_sinrs[b]; });
    EdgeClassification out;
    out.is_edge.assign(n, 0);
    out.rank.assign(n, -1);
    const int count = edge_count(n, edge_fraction);
    for (int i = 0; i < count; ++i) {
        out.is_edge[order[i]] = 1;
        out.rank[order[i]] = i;
        out.threshold = effective_sinrs[order[i]];
    }
    return out;
}

CiMatrix::CiMatrix(int rrh_count)
    : rrh_count_(rrh_count),
      values_(static_cast<std::size_t>(std::max(rrh_count - 1, 0)) * rrh_count,
              std::numeric_limits<double>::infinity()),
      ids_(values_.size(), -1) {}

void CiMatrix::set_column(int col, std::vector<std::pair<double, int>> entries) {
    if (static_cast<int>(entries.size()) != rows()) {
        throw InvalidInput("C/I column needs one entry per interferer");
    }
    std::sort(entries.begin(), entries.end());
    for (int r = 0; r < rows(); ++r) {
        values_[idx(r, col)] = entries[r].first;
        ids_[idx(r, col)] = entries[r].second;
    }
}

CiMatrix build_ci_matrix(const MacroLossTable& macro, std::span<const int> serving, std::span<const char> is_edge) {
    const int L = macro.rrh_count();
    CiMatrix m(L);
    for (int l = 0; l < L; ++l) {
        std::vector<int> edges;
        for (int u = 0; u < static_cast<int>(serving.size()); ++u) {
            if (serving[u] == l && is_edge[u]) edges.push_back(u);
        }
        std::vector<std::pair<double, int>> col;
        for (int j = 0; j < L; ++j) {
            if (j == l) continue;
            double v = std::numeric_limits<double>::infinity();
            if (!edges.empty()) {
                double sum = 0.0;
                for (const int e : edges) sum += ci_value(macro.v(e, l), macro.v(e, j));
                v = sum / static_cast<double>(edges.size());
            }
            col.emplace_back(v, j);
        }
        m.set_column(l, std::move(col));
    }
    return m;
}

std::vector<PriorityPair> priority_pairs(const CiMatrix& m, int row, double threshold_db) {
    std::vector<PriorityPair> out;
    for (int c = 0; c < m.cols(); ++c) {
        if (m.value(row, c) <= threshold_db) out.push_back({c, m.interferer(row, c), m.value(row, c)});
    }
    std::stable_sort(out.begin(), out.end(), [](const PriorityPair& a, const PriorityPair& b) { return a.ci_db < b.ci_db; });
    return out;
}

PayoffTerms rrh_payoff(std::span<const UeOutcome> ues, double d_f, std::int64_t phi_prev) {
    PayoffTerms t;
    std::int64_t sum_e = 0;
    std::int64_t sum_ne = 0;
    for (const UeOutcome& o : ues) {
        if (o.edge) {
            const int s = sgn(o.after, o.reference);
            ++t.k_e;
            sum_e += s;
            if (s == 0) ++t.q_e;
            if (s < 0) ++t.xi_e;
        } else {
            const int s = sgn(o.after, (1.0 - d_f) * o.reference);
            ++t.k_ne;
            sum_ne += s;
            if (s == 0) ++t.q_ne;
            if (s < 0) ++t.xi_ne;
        }
    }
    t.delta = sum_e + sum_ne - (t.k_e - 1 - t.q_e + t.xi_e) - (t.k_ne - 1 - t.q_ne + t.xi_ne);
    t.phi = phi_prev + t.delta;
    return t;
}

bool pareto_prefers(std::span<const std::pair<int, std::int64_t>> candidate,
                    std::span<const std::pair<int, std::int64_t>> incumbent) {
    if (candidate.size() != incumbent.size()) {
        throw InvalidInput("Pareto comparison needs the same players on both sides");
    }
    bool strict = false;
    for (const auto& [rrh, phi] : candidate) {
        const auto it = std::find_if(incumbent.begin(), incumbent.end(), [&](const auto& p) { return p.first == rrh; });
        if (it == incumbent.end()) {
            throw InvalidInput("Pareto comparison needs the same players on both sides");
        }
        if (phi < it->second) return false;
        if (phi > it->second) strict = true;
    }
    return strict;
}

Verdict test_operation(Mask involved, std::span<const Mask> result, CoalitionEvaluator& eval,
                       const PayoffState& state, const GameParams& params) {
    Verdict v;
    for (const Mask r : result) {
        if (mask_size(r) > params.max_coalition_size) v.size_ok = false;
    }
    if (!v.size_ok) return v;

    const int L = eval.rrh_count();
    std::vector<std::vector<UeOutcome>> per_rrh(L);
    for (const Mask r : result) {
        const std::vector<double>& tp = eval.coalition_throughput(r);
        for (int u = 0; u < eval.ue_count(); ++u) {
            const int l = eval.serving_rrh(u);
            if (!(r & bit(l))) continue;
            UeOutcome o;
            o.ue = u;
            o.edge = eval.is_edge(u);
            o.after = tp[u];
            o.reference = o.edge ? state.baseline[u] : eval.no_comp_throughput(u);
            per_rrh[l].push_back(o);
            UeAudit a{u, o.edge, o.reference, o.after, o.edge ? o.reference : (1.0 - params.d_f) * o.reference};
            v.ues.push_back(a);
            if (o.edge && o.after > o.reference) v.edge_gain = true;
        }
    }
    std::vector<std::pair<int, std::int64_t>> cand;
    std::vector<std::pair<int, std::int64_t>> inc;
    std::int64_t u_cand = 0;
    std::int64_t u_inc = 0;
    for (int l = 0; l < L; ++l) {
        if (!(involved & bit(l))) continue;
        const PayoffTerms t = rrh_payoff(per_rrh[l], params.d_f, state.phi[l]);
        v.payoffs.emplace_back(l, t);
        cand.emplace_back(l, t.phi);
        inc.emplace_back(l, state.phi[l]);
        u_cand += t.phi;
        u_inc += state.phi[l];
    }
    v.pareto = pareto_prefers(cand, inc);
    v.utility = u_cand > u_inc;
    v.accepted = v.size_ok && v.pareto && v.utility && v.edge_gain;
    return v;
}

namespace {

void set_baselines(const Partition& p, CoalitionEvaluator& eval, PayoffState& state) {
    state.baseline.assign(eval.ue_count(), 0.0);
    for (const Mask m : p.coalitions()) {
        const auto& tp = eval.coalition_throughput(m);
        for (int u = 0; u < eval.ue_count(); ++u) {
            if (m & bit(eval.serving_rrh(u))) state.baseline[u] = tp[u];
        }
    }
}

void commit(const Verdict& v, PayoffState& state) {
    for (const auto& [l, t] : v.payoffs) state.phi[l] = t.phi;
    for (const UeAudit& a : v.ues) state.baseline[a.ue] = a.after;
}

}  // namespace

ActivationResult run_coalition_formation(const Partition& start, const CiMatrix& ci, CoalitionEvaluator& eval,
                                         PayoffState& state, const GameParams& params) {
    ActivationResult res;
    res.partition = start;
    Partition& p = res.partition;
    if (static_cast<int>(state.phi.size()) != eval.rrh_count()) state.phi.assign(eval.rrh_count(), 0);
    set_baselines(p, eval, state);

    std::vector<std::vector<PriorityPair>> rows;
    for (int r = 0; r < ci.rows(); ++r) {
        rows.push_back(priority_pairs(ci, r, params.ci_threshold_db));
        res.gated_entries += static_cast<int>(rows.back().size());
    }

    // Tested merges keyed by their two parts; dropped once either part's
    // baselines change, since only then can the verdict differ.
    std::set<std::pair<Mask, Mask>> tested;
    const auto invalidate = [&](Mask involved) {
        std::erase_if(tested, [&](const auto& k) { return ((k.first | k.second) & involved) != 0; });
    };

    bool changed = true;
    while (changed) {
        changed = false;
        ++res.rounds;
        for (const auto& pairs : rows) {
            for (const PriorityPair& pr : pairs) {
                const Mask a = p.coalition_of(pr.rrh);
                const Mask b = p.coalition_of(pr.candidate);
                if (a == b) continue;
                const auto key = std::minmax(a, b);
                if (!tested.insert(key).second) continue;
                if (mask_size(a | b) > params.max_coalition_size) {
                    ++res.size_rejections;
                    continue;
                }
                ++res.merge_tests;
                const Mask merged = a | b;
                const Verdict v = test_operation(merged, std::span<const Mask>(&merged, 1), eval, state, params);
                if (!v.accepted) continue;
                p.merge(a, b);
                commit(v, state);
                res.accepted.push_back({OperationRecord::Kind::merge, a, b, v.ues});
                ++res.merges_accepted;
                invalidate(merged);
                changed = true;
            }
        }
        bool split_any = true;
        while (split_any) {
            split_any = false;
            const std::vector<Mask> snapshot = p.coalitions();
            for (const Mask c : snapshot) {
                Mask cur = c;
                for (Mask rest = c; rest != 0; rest &= rest - 1) {
                    if (mask_size(cur) < 2) break;
                    const int m = lowest_member(rest);
                    ++res.split_tests;
                    const std::array<Mask, 2> parts{cur & ~bit(m), bit(m)};
                    const Verdict v = test_operation(cur, parts, eval, state, params);
                    if (!v.accepted) continue;
                    p.split(cur, m);
                    commit(v, state);
                    res.accepted.push_back({OperationRecord::Kind::split, cur, bit(m), v.ues});
                    ++res.splits_accepted;
                    invalidate(cur);
                    cur = parts[0];
                    split_any = true;
                    changed = true;
                }
            }
        }
    }
    return res;
}

StabilityResult check_dhp_stable(const Partition& partition, const CiMatrix& ci, CoalitionEvaluator& eval,
                                 const PayoffState& state, const GameParams& params, MoveSet moves) {
    StabilityResult out;
    PayoffState local = state;
    if (static_cast<int>(local.phi.size()) != eval.rrh_count()) local.phi.assign(eval.rrh_count(), 0);
    set_baselines(partition, eval, local);

    const auto try_merge = [&](std::span<const Mask> parts) {
        Mask merged = 0;
        for (const Mask m : parts) merged |= m;
        if (mask_size(merged) > params.max_coalition_size) return false;
        ++out.operations_checked;
        const Verdict v = test_operation(merged, std::span<const Mask>(&merged, 1), eval, local, params);
        if (v.accepted) {
            out.stable = false;
            out.violation = OperationRecord{OperationRecord::Kind::merge, parts[0], merged & ~parts[0], v.ues};
        }
        return v.accepted;
    };

    if (moves == MoveSet::admissible) {
        std::set<std::pair<Mask, Mask>> seen;
        for (int r = 0; r < ci.rows() && out.stable; ++r) {
            for (const PriorityPair& pr : priority_pairs(ci, r, params.ci_threshold_db)) {
                const Mask a = partition.coalition_of(pr.rrh);
                const Mask b = partition.coalition_of(pr.candidate);
                if (a == b || !seen.insert(std::minmax(a, b)).second) continue;
                const std::array<Mask, 2> parts{a, b};
                if (try_merge(parts)) break;
            }
        }
    } else {
        const auto& cs = partition.coalitions();
        std::vector<Mask> chosen;
        // Depth-first over collections of two or more coalitions within the cap.
        const auto rec = [&](auto&& self, std::size_t from, int size) -> bool {
            if (chosen.size() >= 2 && try_merge(chosen)) return true;
            for (std::size_t i = from; i < cs.size(); ++i) {
                const int s = size + mask_size(cs[i]);
                if (s > params.max_coalition_size) continue;
                chosen.push_back(cs[i]);
                if (self(self, i + 1, s)) return true;
                chosen.pop_back();
            }
            return false;
        };
        rec(rec, 0, 0);
    }
    if (!out.stable) return out;

    for (const Mask c : partition.coalitions()) {
        if (mask_size(c) < 2) continue;
        for (Mask rest = c; rest != 0; rest &= rest - 1) {
            const int m = lowest_member(rest);
            const std::array<Mask, 2> parts{c & ~bit(m), bit(m)};
            ++out.operations_checked;
            const Verdict v = test_operation(c, parts, eval, local, params);
            if (v.accepted) {
                out.stable = false;
                out.violation = OperationRecord{OperationRecord::Kind::split, c, bit(m), v.ues};
                return out;
            }
        }
    }
    return out;
}

bool reactivation_triggers(bool first_tti, std::span<const int> handovers, std::span<const char> prev_edge,
                           std::span<const char> curr_edge) {
    if (first_tti || !handovers.empty()) return true;
    if (prev_edge.size() != curr_edge.size()) return true;
    for (std::size_t i = 0; i < curr_edge.size(); ++i) {
        if ((prev_edge[i] != 0) != (curr_edge[i] != 0)) return true;
    }
    return false;
}

std::vector<Mask> enforce_upkeep(Partition& partition, CoalitionEvaluator& eval, double d_f) {
    std::vector<Mask> dissolved;
    for (const Mask c : partition.coalitions()) {
        if (mask_size(c) < 2) continue;
        const auto& tp = eval.coalition_throughput(c);
        for (int u = 0; u < eval.ue_count(); ++u) {
            if (!(c & bit(eval.serving_rrh(u)))) continue;
            const double nc = eval.no_comp_throughput(u);
            const double floor = eval.is_edge(u) ? nc : (1.0 - d_f) * nc;
            if (tp[u] < floor) {
                dissolved.push_back(c);
                break;
            }
        }
    }
    for (const Mask c : dissolved) partition.dissolve(c);
    return dissolved;
}

}  // namespace nomacomp
