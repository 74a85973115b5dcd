#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace nomacomp {

/// |h_s h_w^H| / (||h_s|| ||h_w||). Throws InvalidInput on a zero vector.
double correlation_metric(const Eigen::RowVectorXcd& h_s, const Eigen::RowVectorXcd& h_w);

struct NomaPair {
    int strong = -1;
    int weak = -1;  ///< -1 for a single-user beam
};

/// Splits the group into ceil(n/2) strong users (largest ||h||, ties to the
/// lower id) and the rest weak. Strong users, in descending gain, each take
/// the unassigned weak user with the largest correlation metric. Pair i is
/// beam i. With an odd group the weakest strong user is left single.
/// `channels[i]` is the channel of `ue_ids[i]` toward the serving RRH.
std::vector<NomaPair> pair_noma_users(std::span<const int> ue_ids, std::span<const Eigen::RowVectorXcd> channels);

struct BeamSet {
    Eigen::MatrixXcd w;  ///< N x beams, unit-norm columns
    bool regularized = false;
};

/// W = H^H (H H^H)^-1 with unit-norm columns; rows of H are the strong users'
/// channels (beams x N, beams <= N). Above `condition_limit` the inverse is
/// Tikhonov-regularized with eps = 1e-10 * trace(H H^H) / N.
BeamSet zf_beamformers(const Eigen::MatrixXcd& h, double condition_limit = 1e6);

/// a_k = G_k^-p / sum_j G_j^-p. Throws InvalidInput on G <= 0 or p outside [0, 1].
std::vector<double> ftpc_coefficients(std::span<const double> gains, double p);

/// Beam of a cooperating RRH for an edge UE: argmax over beams of the
/// correlation with that beam's strong user, ties to the lowest index.
int best_comp_beam(const Eigen::RowVectorXcd& h_edge, std::span<const Eigen::RowVectorXcd> strong_channels);

/// Per beam, per subcarrier transmit power.
double beam_power(double tx_power_total_w, int num_beams, int num_subcarriers);

struct SinrBreakdown {
    double useful = 0.0;
    double intrabeam = 0.0;
    double interbeam = 0.0;
    double intercell = 0.0;
    double noise = 0.0;
    double sinr = 0.0;

    double interference() const { return intrabeam + interbeam + intercell; }
};

/// Beam gains |h_{j,u} w_{j,n}|^2 seen by one UE on one RB, row-major
/// rrh x beam. Inactive beams hold 0.
struct GainView {
    const double* g = nullptr;
    int rrh_count = 0;
    int beams = 0;

    double at(int rrh, int beam) const { return g[rrh * beams + beam]; }
    double rowsum(int rrh) const {
        double s = 0.0;
        for (int n = 0; n < beams; ++n) s += at(rrh, n);
        return s;
    }
};

/// A UE's slot in one NOMA cluster.
struct ClusterSlot {
    int rrh = 0;
    int beam = 0;
    double coeff = 1.0;        ///< own power fraction a_k
    double coeff_after = 0.0;  ///< sum of a_k' over members decoded after it
};

/// Interference terms without cooperation: intrabeam from later-decoded
/// members, interbeam from the serving RRH's other beams, intercell from
/// every other RRH at full beam power.
SinrBreakdown sinr_no_comp(const GainView& gains, const ClusterSlot& slot, double beam_power_w, double noise_w);

/// Joint transmission from `serving` plus `cooperating` slots (one per other
/// transmitting coalition member). `in_coalition[j]` marks coalition RRHs;
/// their signals count as desired, residual intrabeam or interbeam, never as
/// full intercell.
SinrBreakdown sinr_comp(const GainView& gains, const ClusterSlot& serving, std::span<const ClusterSlot> cooperating,
                        std::span<const char> in_coalition, double beam_power_w, double noise_w);

}  // namespace nomacomp
