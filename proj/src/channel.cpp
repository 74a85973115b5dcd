#include "nomacomp/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nomacomp/errors.hpp"

namespace nomacomp {

double PathlossModel::pathloss_db(double distance_m, double carrier_ghz) const {
    if (std::isnan(distance_m) || std::isnan(carrier_ghz)) {
        throw InvalidInput("path loss inputs must not be NaN");
    }
    if (!(carrier_ghz > 0.0)) {
        throw InvalidInput("carrier frequency must be positive");
    }
    const double d = std::max(distance_m, min_distance_m);
    return a * std::log10(d) + b + c * std::log10(carrier_ghz / 5.0);
}

double draw_shadowing(double std_db, TracedEngine& rng) {
    if (std_db < 0.0) {
        throw InvalidInput("shadowing standard deviation must be non-negative");
    }
    if (std_db == 0.0) {
        return 0.0;
    }
    std::normal_distribution<double> n(0.0, std_db);
    return n(rng);
}

std::vector<double> draw_shadowing_map(int ue_count, int rrh_count, double std_db, TracedEngine& rng) {
    std::vector<double> out(static_cast<std::size_t>(ue_count) * rrh_count);
    for (double& s : out) s = draw_shadowing(std_db, rng);
    return out;
}

MacroLossTable::MacroLossTable(int ue_count, int rrh_count)
    : ue_count_(ue_count),
      rrh_count_(rrh_count),
      entries_(static_cast<std::size_t>(ue_count) * rrh_count),
      v_(entries_.size(), 0.0) {}

void MacroLossTable::set(int ue, int rrh, const MacroLoss& loss) {
    entries_[index(ue, rrh)] = loss;
    v_[index(ue, rrh)] = loss.v_db;
}

MacroLossTable compute_macro_losses(const HexLayout& layout, std::span<const Ue> ues, std::span<const Rrh> rrhs,
                                    std::span<const double> shadowing, const PathlossModel& model, double carrier_ghz) {
    const int nu = static_cast<int>(ues.size());
    const int nr = static_cast<int>(rrhs.size());
    if (shadowing.size() != static_cast<std::size_t>(nu) * nr) {
        throw InvalidInput("shadowing map does not cover every (UE, RRH) pair");
    }
    MacroLossTable table(nu, nr);
    for (int u = 0; u < nu; ++u) {
        for (int l = 0; l < nr; ++l) {
            MacroLoss m;
            m.pathloss_db = model.pathloss_db(layout.wrap_distance(rrhs[l].position, ues[u].position), carrier_ghz);
            m.shadowing_db = shadowing[static_cast<std::size_t>(u) * nr + l];
            m.tx_gain_dbi = rrhs[l].antenna_gain_dbi;
            m.rx_gain_dbi = ues[u].antenna_gain_dbi;
            m.v_db = m.pathloss_db + m.shadowing_db - m.tx_gain_dbi - m.rx_gain_dbi;
            table.set(u, l, m);
        }
    }
    return table;
}

ChannelRealization::ChannelRealization(int ue_count, int rrh_count, int antennas)
    : ue_count_(ue_count),
      rrh_count_(rrh_count),
      antennas_(antennas),
      data_(static_cast<std::size_t>(ue_count) * rrh_count * antennas),
      gains_(static_cast<std::size_t>(ue_count) * rrh_count, 0.0) {}

void ChannelRealization::refresh_gains() {
    for (int u = 0; u < ue_count_; ++u) {
        for (int l = 0; l < rrh_count_; ++l) {
            gains_[static_cast<std::size_t>(u) * rrh_count_ + l] = h(u, l).squaredNorm();
        }
    }
}

ChannelRealization realize_channels(const MacroLossTable& macro, int antennas, TracedEngine& rng) {
    if (antennas < 1) {
        throw InvalidInput("antenna count must be >= 1");
    }
    ChannelRealization out(macro.ue_count(), macro.rrh_count(), antennas);
    // Real and imaginary parts each carry half the unit variance.
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    for (int u = 0; u < macro.ue_count(); ++u) {
        for (int l = 0; l < macro.rrh_count(); ++l) {
            const double amp = std::sqrt(db_to_linear(-macro.v(u, l)));
            std::complex<double>* h = out.mutable_h(u, l);
            for (int k = 0; k < antennas; ++k) {
                const double re = n(rng);
                const double im = n(rng);
                h[k] = amp * std::complex<double>(re, im);
            }
        }
    }
    out.refresh_gains();
    return out;
}

double noise_power_w(double bandwidth_hz, double density_dbm_per_hz, double noise_figure_db) {
    if (!(bandwidth_hz > 0.0)) {
        throw InvalidInput("noise bandwidth must be positive");
    }
    return db_to_linear(density_dbm_per_hz + noise_figure_db) * 1e-3 * bandwidth_hz;
}

}  // namespace nomacomp
