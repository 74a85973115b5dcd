#pragma once

#include <array>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "nomacomp/rng.hpp"

namespace nomacomp {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(Vec2 o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    double norm() const { return std::hypot(x, y); }
    bool operator==(const Vec2&) const = default;
};

/// Integer cell coordinates on the hexagonal lattice (axial form).
struct HexCell {
    int a = 0;
    int b = 0;
    bool operator==(const HexCell&) const = default;
};

struct Rrh {
    int id = 0;
    Vec2 position;
    double tx_power_total_w = 1.0;
    int num_antennas = 4;
    double antenna_gain_dbi = 8.17;
};

struct Ue {
    int id = 0;
    Vec2 position;
    Vec2 direction{1.0, 0.0};  ///< unit vector, constant for the run
    double speed_mps = 0.0;
    int serving_rrh = 0;
    double antenna_gain_dbi = 0.0;
    bool is_edge = false;
};

struct RrhParams {
    double tx_power_total_w = 1.0;
    int num_antennas = 4;
    double antenna_gain_dbi = 8.17;
};

/// Hexagonal cell grid whose composite footprint tiles the plane, giving every
/// UE a toroidal interference field.
///
/// RRH i sits at the centre of a pointy-top hexagon of the given circumradius;
/// neighbours are sqrt(3)·circumradius apart. The footprint is one hexagon per
/// coset of the wrap-around lattice, picked in spiral order from the origin.
class HexLayout {
  public:
    HexLayout(int rrh_count, double circumradius);

    int rrh_count() const { return rrh_count_; }
    double circumradius() const { return circumradius_; }
    double inter_site_distance() const { return std::sqrt(3.0) * circumradius_; }

    /// Non-trivial translations of the composite footprint (6, or 0 for one RRH).
    const std::vector<Vec2>& wraparound_translations() const { return translations_; }

    /// Cells making up the footprint; the first rrh_count host RRHs.
    const std::vector<HexCell>& cells() const { return cells_; }

    Vec2 cell_center(HexCell c) const;
    HexCell cell_containing(Vec2 p) const;
    bool in_footprint(Vec2 p) const;

    /// Offset from `from` to the nearest wrap-around image of `to`.
    Vec2 wrap_offset(Vec2 from, Vec2 to) const;
    double wrap_distance(Vec2 from, Vec2 to) const { return wrap_offset(from, to).norm(); }

    /// Maps a point that left the footprint back inside it.
    Vec2 wrap_position(Vec2 p) const;

    /// True when p lies in the hexagon of circumradius R centred on `center`.
    static bool in_hexagon(Vec2 p, Vec2 center, double circumradius);

  private:
    int rrh_count_;
    double circumradius_;
    int lattice_i_ = 0;
    int lattice_j_ = 0;
    std::vector<HexCell> cells_;
    std::vector<Vec2> translations_;
};

struct LayoutResult {
    HexLayout layout;
    std::vector<Rrh> rrhs;
};

/// Throws ConfigError when rrh_count < 1 or circumradius <= 0.
LayoutResult build_layout(int rrh_count, double circumradius, const RrhParams& params = {});

/// Drops `ues_per_cell` UEs uniformly inside every RRH's hexagon, each with a
/// uniformly random constant heading. UE ids run cell by cell.
std::vector<Ue> drop_ues(const HexLayout& layout, std::span<const Rrh> rrhs, int ues_per_cell, double speed_mps,
                         double ue_antenna_gain_dbi, TracedEngine& rng);

/// Straight-line motion for dt seconds; leaving the footprint re-enters on the
/// opposite side through the wrap-around translations.
void advance_mobility(const HexLayout& layout, std::span<Ue> ues, double dt);

/// Re-attaches every UE to the RRH with the smallest macro-scale loss v
/// (row-major ue x rrh). Ties keep the incumbent. Returns ids of UEs that
/// changed RRH.
std::vector<int> update_attachment(std::span<Ue> ues, std::span<const double> macro_v, int rrh_count);

constexpr double kmh_to_mps(double kmh) { return kmh * 1000.0 / 3600.0; }

}  // namespace nomacomp
