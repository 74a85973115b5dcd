#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nomacomp/channel.hpp"
#include "nomacomp/coalition_evaluator.hpp"

namespace nomacomp {

/// Disjoint RRH sets covering 0..rrh_count-1, kept ordered by lowest member.
class Partition {
  public:
    Partition() = default;
    explicit Partition(std::vector<Mask> coalitions);

    static Partition singletons(int rrh_count);

    const std::vector<Mask>& coalitions() const { return coalitions_; }
    Mask coalition_of(int rrh) const;

    /// Disjoint, non-empty, covering every RRH, none larger than max_size.
    bool valid(int rrh_count, int max_size) const;

    void merge(Mask a, Mask b);
    void split(Mask coalition, int member);
    void dissolve(Mask coalition);

    double average_size() const;
    int max_size() const;

    std::string to_string() const;  ///< e.g. "{0,3}{1}{2}"

    bool operator==(const Partition&) const = default;

  private:
    void normalize();
    std::vector<Mask> coalitions_;
};

/// -1, 0 or 1 as b is below, equal to or above a.
int sgn(double b, double a);

/// Number of UEs at the lowest effective SINR that count as edge:
/// floor(edge_fraction * ue_count).
int edge_count(int ue_count, double edge_fraction);

struct EdgeClassification {
    std::vector<char> is_edge;
    std::vector<int> rank;  ///< position among edge UEs by ascending SINR, -1 otherwise
    double threshold = 0.0;  ///< highest effective SINR among edge UEs
};

/// Lowest effective SINRs are edge; ties go to the lower UE id.
EdgeClassification classify_edge_ues(std::span<const double> effective_sinrs, double edge_fraction);

/// v_interferer - v_serving, dB.
inline double ci_value(double v_serving_db, double v_interferer_db) { return v_interferer_db - v_serving_db; }

/// (L-1) x L matrix: column l holds RRH l's dB-averaged edge C/I toward each
/// other RRH, ascending, with the interferer id alongside. Columns of RRHs
/// without edge UEs are +inf.
class CiMatrix {
  public:
    CiMatrix(int rrh_count);

    int rows() const { return rrh_count_ - 1; }
    int cols() const { return rrh_count_; }
    double value(int row, int col) const { return values_[idx(row, col)]; }
    int interferer(int row, int col) const { return ids_[idx(row, col)]; }
    void set_column(int col, std::vector<std::pair<double, int>> entries);

  private:
    std::size_t idx(int row, int col) const { return static_cast<std::size_t>(col) * (rrh_count_ - 1) + row; }
    int rrh_count_;
    std::vector<double> values_;
    std::vector<int> ids_;
};

CiMatrix build_ci_matrix(const MacroLossTable& macro, std::span<const int> serving, std::span<const char> is_edge);

struct PriorityPair {
    int rrh;
    int candidate;
    double ci_db;
};

/// Entries of one row at or below the threshold, ascending by value (ties to
/// the lower RRH id). The RRH seeks the candidate as a collaborator.
std::vector<PriorityPair> priority_pairs(const CiMatrix& m, int row, double threshold_db);

/// Outcome for one UE when an operation is tested.
struct UeOutcome {
    int ue = 0;
    bool edge = false;
    double after = 0.0;      ///< delta^b
    double reference = 0.0;  ///< delta^a for edge UEs, the no-cooperation value for non-edge UEs
};

struct PayoffTerms {
    int k_e = 0;
    int k_ne = 0;
    int q_e = 0;
    int q_ne = 0;
    int xi_e = 0;
    int xi_ne = 0;
    std::int64_t delta = 0;  ///< phi - phi^a
    std::int64_t phi = 0;
};

/// RRH payoff evaluated term by term: edge sgn sum, non-edge sgn sum against
/// (1 - d_f) * reference, both count penalties, plus phi_prev.
PayoffTerms rrh_payoff(std::span<const UeOutcome> ues, double d_f, std::int64_t phi_prev);

/// phi >= for every RRH and > for at least one. Supports must match.
bool pareto_prefers(std::span<const std::pair<int, std::int64_t>> candidate,
                    std::span<const std::pair<int, std::int64_t>> incumbent);

struct GameParams {
    double d_f = 0.4;
    double ci_threshold_db = 10.0;
    int max_coalition_size = 4;
};

/// Cumulative per-RRH payoffs and per-UE throughput under the current partition.
struct PayoffState {
    std::vector<std::int64_t> phi;
    std::vector<double> baseline;

    explicit PayoffState(int rrh_count = 0) : phi(rrh_count, 0) {}
};

struct UeAudit {
    int ue = 0;
    bool edge = false;
    double before = 0.0;
    double after = 0.0;
    double threshold = 0.0;  ///< floor the UE had to stay at or above
};

struct OperationRecord {
    enum class Kind { merge, split };
    Kind kind = Kind::merge;
    Mask first = 0;   ///< merge: one part; split: the coalition
    Mask second = 0;  ///< merge: other part; split: the leaving member
    std::vector<UeAudit> ues;
};

struct Verdict {
    bool accepted = false;
    bool size_ok = true;
    bool pareto = false;
    bool utility = false;
    bool edge_gain = false;
    std::vector<std::pair<int, PayoffTerms>> payoffs;
    std::vector<UeAudit> ues;
};

/// Tests replacing the coalitions in `involved` by `result`. Accepted iff
/// within the cap, Pareto preferred, utility above the parts', and at least
/// one involved edge UE strictly gains.
Verdict test_operation(Mask involved, std::span<const Mask> result, CoalitionEvaluator& eval,
                       const PayoffState& state, const GameParams& params);

struct ActivationResult {
    Partition partition;
    int merge_tests = 0;
    int split_tests = 0;
    int merges_accepted = 0;
    int splits_accepted = 0;
    int size_rejections = 0;
    int rounds = 0;
    int gated_entries = 0;  ///< I_M entries at or below the threshold
    std::vector<OperationRecord> accepted;

    int iterations() const { return merge_tests + split_tests; }
};

/// Merge pass over the rows of I_M, then split sweeps; rounds repeat while
/// anything was accepted. Sets state.baseline to the starting partition's
/// throughputs first, then keeps it and phi current.
ActivationResult run_coalition_formation(const Partition& start, const CiMatrix& ci, CoalitionEvaluator& eval,
                                         PayoffState& state, const GameParams& params);

enum class MoveSet {
    admissible,    ///< C/I-gated pair merges and every single-member split
    unrestricted,  ///< merges of any coalition collection within the cap, every split
};

struct StabilityResult {
    bool stable = true;
    std::optional<OperationRecord> violation;
    int operations_checked = 0;
};

/// Exhaustive search for an acceptable operation from `partition`, with
/// baselines taken as the partition's own throughputs.
StabilityResult check_dhp_stable(const Partition& partition, const CiMatrix& ci, CoalitionEvaluator& eval,
                                 const PayoffState& state, const GameParams& params, MoveSet moves);

/// First TTI, any handover or any edge-status flip.
bool reactivation_triggers(bool first_tti, std::span<const int> handovers, std::span<const char> prev_edge,
                           std::span<const char> curr_edge);

/// Dissolves retained coalitions in which an edge UE is below its
/// no-cooperation throughput or a non-edge UE below (1 - d_f) of it.
/// Returns the dissolved masks.
std::vector<Mask> enforce_upkeep(Partition& partition, CoalitionEvaluator& eval, double d_f);

}  // namespace nomacomp
