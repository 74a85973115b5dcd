#include "nomacomp/link_adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nomacomp/errors.hpp"

namespace nomacomp {

namespace {

struct McsRow {
    int qm;
    int rate;
};

// 4-bit CQI table, 256QAM variant.
constexpr std::array<McsRow, CqiTable::kRows> kNr256Qam{{
    {2, 78},  {2, 193}, {2, 449}, {4, 378}, {4, 490}, {4, 616}, {6, 466}, {6, 567},
    {6, 666}, {6, 772}, {6, 873}, {8, 711}, {8, 797}, {8, 885}, {8, 948},
}};

}  // namespace

CqiTable CqiTable::nr_256qam() {
    std::array<CqiEntry, kRows> rows{};
    for (int i = 0; i < kRows; ++i) {
        rows[i].index = i + 1;
        rows[i].modulation_order = kNr256Qam[i].qm;
        rows[i].code_rate_x1024 = kNr256Qam[i].rate;
        // -6.7 dB + 2.1 dB per step; rounded to 0.1 dB so the table reads cleanly.
        rows[i].sinr_threshold_db = std::round((-6.7 + 2.1 * i) * 10.0) / 10.0;
    }
    return CqiTable(rows);
}

CqiTable::CqiTable(const std::array<CqiEntry, kRows>& rows) : rows_(rows) {
    for (int i = 0; i < kRows; ++i) {
        const auto& r = rows_[i];
        if (r.index != i + 1) {
            throw InvalidInput("CQI table rows must be indexed 1..15 in order");
        }
        if (r.modulation_order != 2 && r.modulation_order != 4 && r.modulation_order != 6 &&
            r.modulation_order != 8) {
            throw InvalidInput("CQI " + std::to_string(r.index) + ": modulation order must be 2, 4, 6 or 8");
        }
        if (r.code_rate_x1024 <= 0 || r.code_rate_x1024 >= 1024) {
            throw InvalidInput("CQI " + std::to_string(r.index) + ": code rate out of (0, 1024)");
        }
        if (!std::isfinite(r.sinr_threshold_db)) {
            throw InvalidInput("CQI " + std::to_string(r.index) + ": threshold not finite");
        }
        linear_thresholds_[i] = std::pow(10.0, r.sinr_threshold_db / 10.0);
        if (i > 0) {
            const auto& prev = rows_[i - 1];
            if (r.sinr_threshold_db <= prev.sinr_threshold_db) {
                throw InvalidInput("CQI thresholds must be strictly increasing");
            }
            if (r.spectral_efficiency() <= prev.spectral_efficiency()) {
                throw InvalidInput("CQI spectral efficiencies must be strictly increasing");
            }
        }
    }
}

int CqiTable::cqi_for(double sinr_linear) const {
    if (std::isnan(sinr_linear) || sinr_linear < 0.0) {
        throw InvalidInput("SINR must be a non-negative number");
    }
    // Compare in the linear domain so a SINR built as 10^(thr/10) lands exactly on its row.
    const auto it = std::upper_bound(linear_thresholds_.begin(), linear_thresholds_.end(), sinr_linear);
    return static_cast<int>(it - linear_thresholds_.begin());
}

const CqiEntry& CqiTable::entry(int cqi) const {
    if (cqi < 1 || cqi > kRows) {
        throw InvalidInput("CQI index out of range: " + std::to_string(cqi));
    }
    return rows_[cqi - 1];
}

int TbsParams::re_per_rb() const {
    return std::min(max_re_per_rb, subcarriers_per_rb * symbols_per_slot - dmrs_re());
}

std::int64_t per_rb_tbs(const CqiTable& table, int cqi, const TbsParams& params) {
    if (cqi == 0) {
        return 0;
    }
    const CqiEntry& e = table.entry(cqi);
    // Integer form of floor(N_RE * R * Q_m / 8) * 8 with R = rate / 1024.
    const std::int64_t numerator =
        static_cast<std::int64_t>(params.re_per_rb()) * e.modulation_order * e.code_rate_x1024;
    return (numerator / (1024 * 8)) * 8;
}

TbsResult ue_throughput(std::span<const double> per_rb_sinrs, double tti_seconds, const CqiTable& table,
                        const TbsParams& params) {
    TbsResult out;
    out.per_rb_bits.reserve(per_rb_sinrs.size());
    for (const double s : per_rb_sinrs) {
        const std::int64_t bits = per_rb_tbs(table, table.cqi_for(s), params);
        out.per_rb_bits.push_back(bits);
        out.total_bits += bits;
    }
    out.throughput_bps = static_cast<double>(out.total_bits) / tti_seconds;
    return out;
}

double effective_sinr(std::span<const double> per_rb_sinrs, SinrAveraging domain) {
    if (per_rb_sinrs.empty()) {
        throw InvalidInput("effective SINR of an empty RB list is undefined");
    }
    double acc = 0.0;
    if (domain == SinrAveraging::linear) {
        for (const double s : per_rb_sinrs) acc += s;
        return acc / static_cast<double>(per_rb_sinrs.size());
    }
    for (const double s : per_rb_sinrs) acc += 10.0 * std::log10(s);
    return std::pow(10.0, acc / static_cast<double>(per_rb_sinrs.size()) / 10.0);
}

}  // namespace nomacomp
