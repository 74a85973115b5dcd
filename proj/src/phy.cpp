#include "nomacomp/phy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "nomacomp/errors.hpp"

namespace nomacomp {

double correlation_metric(const Eigen::RowVectorXcd& h_s, const Eigen::RowVectorXcd& h_w) {
    const double ns = h_s.norm();
    const double nw = h_w.norm();
    if (ns == 0.0 || nw == 0.0) {
        throw InvalidInput("correlation metric undefined for a zero channel");
    }
    if (h_s.size() != h_w.size()) {
        throw InvalidInput("correlation metric needs equal-length channels");
    }
    return std::min(1.0, std::abs(h_s.dot(h_w)) / (ns * nw));
}

std::vector<NomaPair> pair_noma_users(std::span<const int> ue_ids, std::span<const Eigen::RowVectorXcd> channels) {
    if (ue_ids.size() != channels.size()) {
        throw InvalidInput("pairing needs one channel per UE");
    }
    const int n = static_cast<int>(ue_ids.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> gain(n);
    for (int i = 0; i < n; ++i) gain[i] = channels[i].squaredNorm();
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        if (gain[x] != gain[y]) return gain[x] > gain[y];
        return ue_ids[x] < ue_ids[y];
    });

    const int strong_count = (n + 1) / 2;
    std::vector<char> taken(n, 0);
    std::vector<NomaPair> pairs;
    pairs.reserve(strong_count);
    for (int s = 0; s < strong_count; ++s) {
        const int si = order[s];
        int best = -1;
        double best_c = -1.0;
        for (int w = strong_count; w < n; ++w) {
            const int wi = order[w];
            if (taken[wi]) continue;
            const double c = correlation_metric(channels[si], channels[wi]);
            if (c > best_c) {
                best_c = c;
                best = wi;
            }
        }
        NomaPair p{ue_ids[si], -1};
        if (best >= 0) {
            taken[best] = 1;
            p.weak = ue_ids[best];
        }
        pairs.push_back(p);
    }
    return pairs;
}

BeamSet zf_beamformers(const Eigen::MatrixXcd& h, double condition_limit) {
    const Eigen::Index beams = h.rows();
    const Eigen::Index antennas = h.cols();
    if (beams < 1 || beams > antennas) {
        throw InvalidInput("zero-forcing needs 1 <= beams <= antennas");
    }
    BeamSet out;
    Eigen::MatrixXcd gram = h * h.adjoint();
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || smax / smin > condition_limit) {
        const double eps = 1e-10 * gram.trace().real() / static_cast<double>(antennas);
        gram += eps * Eigen::MatrixXcd::Identity(beams, beams);
        out.regularized = true;
    }
    out.w = h.adjoint() * gram.inverse();
    for (Eigen::Index n = 0; n < beams; ++n) {
        const double norm = out.w.col(n).norm();
        if (norm > 0.0) out.w.col(n) /= norm;
    }
    return out;
}

std::vector<double> ftpc_coefficients(std::span<const double> gains, double p) {
    if (gains.empty()) {
        throw InvalidInput("power control needs at least one user");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidInput("FTPC exponent must lie in [0, 1]");
    }
    std::vector<double> a(gains.size());
    double total = 0.0;
    for (std::size_t k = 0; k < gains.size(); ++k) {
        if (!(gains[k] > 0.0)) {
            throw InvalidInput("FTPC needs strictly positive channel gains");
        }
        a[k] = std::pow(gains[k], -p);
        total += a[k];
    }
    for (double& x : a) x /= total;
    return a;
}

int best_comp_beam(const Eigen::RowVectorXcd& h_edge, std::span<const Eigen::RowVectorXcd> strong_channels) {
    if (strong_channels.empty()) {
        throw InvalidInput("cooperating RRH has no active beam");
    }
    int best = 0;
    double best_c = -1.0;
    for (std::size_t n = 0; n < strong_channels.size(); ++n) {
        const double c = correlation_metric(h_edge, strong_channels[n]);
        if (c > best_c) {
            best_c = c;
            best = static_cast<int>(n);
        }
    }
    return best;
}

double beam_power(double tx_power_total_w, int num_beams, int num_subcarriers) {
    if (!(tx_power_total_w > 0.0) || num_beams < 1 || num_subcarriers < 1) {
        throw InvalidInput("beam power needs positive power, beams and subcarriers");
    }
    return tx_power_total_w / (static_cast<double>(num_beams) * num_subcarriers);
}

namespace {

void finish(SinrBreakdown& s, double noise_w) {
    s.noise = noise_w;
    s.sinr = s.useful / (s.intrabeam + s.interbeam + s.intercell + s.noise);
}

}  // namespace

SinrBreakdown sinr_no_comp(const GainView& gains, const ClusterSlot& slot, double beam_power_w, double noise_w) {
    SinrBreakdown s;
    const double own = gains.at(slot.rrh, slot.beam);
    s.useful = own * slot.coeff * beam_power_w;
    s.intrabeam = own * slot.coeff_after * beam_power_w;
    for (int n = 0; n < gains.beams; ++n) {
        if (n != slot.beam) s.interbeam += gains.at(slot.rrh, n);
    }
    s.interbeam *= beam_power_w;
    for (int j = 0; j < gains.rrh_count; ++j) {
        if (j != slot.rrh) s.intercell += gains.rowsum(j);
    }
    s.intercell *= beam_power_w;
    finish(s, noise_w);
    return s;
}

SinrBreakdown sinr_comp(const GainView& gains, const ClusterSlot& serving, std::span<const ClusterSlot> cooperating,
                        std::span<const char> in_coalition, double beam_power_w, double noise_w) {
    SinrBreakdown s;
    const double own = gains.at(serving.rrh, serving.beam);
    s.useful = own * serving.coeff * beam_power_w;
    s.intrabeam = own * serving.coeff_after * beam_power_w;
    for (int n = 0; n < gains.beams; ++n) {
        if (n != serving.beam) s.interbeam += gains.at(serving.rrh, n);
    }
    s.interbeam *= beam_power_w;

    double outside = 0.0;
    for (int j = 0; j < gains.rrh_count; ++j) {
        if (j != serving.rrh && !in_coalition[j]) outside += gains.rowsum(j);
    }
    s.intercell = outside * beam_power_w;
    for (const ClusterSlot& c : cooperating) {
        const double g = gains.at(c.rrh, c.beam);
        s.useful += g * c.coeff * beam_power_w;
        double other = 0.0;
        for (int n = 0; n < gains.beams; ++n) {
            if (n != c.beam) other += gains.at(c.rrh, n);
        }
        s.intercell += g * c.coeff_after * beam_power_w + other * beam_power_w;
    }
    finish(s, noise_w);
    return s;
}

}  // namespace nomacomp
