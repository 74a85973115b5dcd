#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "nomacomp/rng.hpp"
#include "nomacomp/topology.hpp"

namespace nomacomp {

/// Lambda = a*log10(max(d, d_min)) + b + c*log10(f_GHz / 5).
struct PathlossModel {
    double a = 22.7;
    double b = 41.0;
    double c = 20.0;
    double min_distance_m = 10.0;

    /// Throws InvalidInput on NaN or non-positive carrier.
    double pathloss_db(double distance_m, double carrier_ghz) const;

    bool operator==(const PathlossModel&) const = default;
};

/// Zero-mean Gaussian sample with the given standard deviation in dB.
double draw_shadowing(double std_db, TracedEngine& rng);

struct MacroLoss {
    double pathloss_db = 0.0;
    double shadowing_db = 0.0;
    double tx_gain_dbi = 0.0;
    double rx_gain_dbi = 0.0;
    double v_db = 0.0;  ///< pathloss + shadowing - tx gain - rx gain
};

/// Shadowing per (UE, RRH) pair, row-major ue x rrh. Drawn once per run.
std::vector<double> draw_shadowing_map(int ue_count, int rrh_count, double std_db, TracedEngine& rng);

class MacroLossTable {
  public:
    MacroLossTable() = default;
    MacroLossTable(int ue_count, int rrh_count);

    int ue_count() const { return ue_count_; }
    int rrh_count() const { return rrh_count_; }

    const MacroLoss& at(int ue, int rrh) const { return entries_[index(ue, rrh)]; }
    MacroLoss& at(int ue, int rrh) { return entries_[index(ue, rrh)]; }
    double v(int ue, int rrh) const { return v_[index(ue, rrh)]; }

    /// Row-major ue x rrh copy of v, the input to update_attachment.
    std::span<const double> v_values() const { return v_; }

    void set(int ue, int rrh, const MacroLoss& loss);

  private:
    std::size_t index(int ue, int rrh) const { return static_cast<std::size_t>(ue) * rrh_count_ + rrh; }

    int ue_count_ = 0;
    int rrh_count_ = 0;
    std::vector<MacroLoss> entries_;
    std::vector<double> v_;
};

/// Macro losses over wrap-around distances. `shadowing` is row-major ue x rrh.
MacroLossTable compute_macro_losses(const HexLayout& layout, std::span<const Ue> ues, std::span<const Rrh> rrhs,
                                    std::span<const double> shadowing, const PathlossModel& model, double carrier_ghz);

/// One TTI of flat-fading channel row vectors h (1 x N) per (UE, RRH) pair.
class ChannelRealization {
  public:
    using Row = Eigen::Map<const Eigen::RowVectorXcd>;

    ChannelRealization() = default;
    ChannelRealization(int ue_count, int rrh_count, int antennas);

    int ue_count() const { return ue_count_; }
    int rrh_count() const { return rrh_count_; }
    int antennas() const { return antennas_; }

    Row h(int ue, int rrh) const { return Row(data_.data() + offset(ue, rrh), antennas_); }
    std::complex<double>* mutable_h(int ue, int rrh) { return data_.data() + offset(ue, rrh); }

    /// ||h||^2, cached by realize_channels and refresh_gains.
    double gain(int ue, int rrh) const { return gains_[static_cast<std::size_t>(ue) * rrh_count_ + rrh]; }
    void refresh_gains();

  private:
    std::size_t offset(int ue, int rrh) const {
        return (static_cast<std::size_t>(ue) * rrh_count_ + rrh) * antennas_;
    }

    int ue_count_ = 0;
    int rrh_count_ = 0;
    int antennas_ = 0;
    std::vector<std::complex<double>> data_;
    std::vector<double> gains_;
};

/// h = sqrt(10^(-v/10)) * r, r with i.i.d. CN(0, 1) entries, fresh per call.
ChannelRealization realize_channels(const MacroLossTable& macro, int antennas, TracedEngine& rng);

/// Thermal noise plus receiver noise figure over `bandwidth_hz`, in watts.
double noise_power_w(double bandwidth_hz, double density_dbm_per_hz = -174.0, double noise_figure_db = 9.0);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace nomacomp
