#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace nomacomp {

/// One row of the 4-bit CQI table (256QAM variant).
struct CqiEntry {
    int index = 0;
    int modulation_order = 2;   ///< Q_m, bits per symbol
    int code_rate_x1024 = 0;    ///< R * 1024
    double sinr_threshold_db = 0.0;

    double code_rate() const { return code_rate_x1024 / 1024.0; }
    double spectral_efficiency() const { return modulation_order * code_rate(); }

    bool operator==(const CqiEntry&) const = default;
};

class CqiTable {
  public:
    static constexpr int kRows = 15;

    /// 256QAM CQI rows with thresholds from -6.7 dB (CQI 1) to 22.7 dB
    /// (CQI 15) in 2.1 dB steps.
    static CqiTable nr_256qam();

    explicit CqiTable(const std::array<CqiEntry, kRows>& rows);

    /// Largest CQI whose threshold is <= the SINR in dB, 0 below CQI 1.
    /// Throws InvalidInput on NaN or negative linear SINR.
    int cqi_for(double sinr_linear) const;

    /// CQI index 1..15.
    const CqiEntry& entry(int cqi) const;
    const std::array<CqiEntry, kRows>& rows() const { return rows_; }

    bool operator==(const CqiTable&) const = default;

  private:
    std::array<CqiEntry, kRows> rows_;
    std::array<double, kRows> linear_thresholds_{};
};

struct TbsParams {
    int subcarriers_per_rb = 12;
    int symbols_per_slot = 14;
    int dmrs_symbols = 2;
    int max_re_per_rb = 156;

    int dmrs_re() const { return dmrs_symbols * subcarriers_per_rb; }
    int re_per_rb() const;
};

/// Bits carried by one RB at `cqi`: floor(N_RE * R * Q_m), rounded down to a
/// whole byte. One layer, no overhead.
std::int64_t per_rb_tbs(const CqiTable& table, int cqi, const TbsParams& params = {});

struct TbsResult {
    std::vector<std::int64_t> per_rb_bits;
    std::int64_t total_bits = 0;
    double throughput_bps = 0.0;
};

TbsResult ue_throughput(std::span<const double> per_rb_sinrs, double tti_seconds,
                        const CqiTable& table, const TbsParams& params = {});

enum class SinrAveraging { linear, db };

/// Mean of the per-RB SINRs of one TTI. Throws InvalidInput on an empty list.
double effective_sinr(std::span<const double> per_rb_sinrs,
                      SinrAveraging domain = SinrAveraging::linear);

}  // namespace nomacomp
