#include "nomacomp/topology.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <string>

#include "nomacomp/errors.hpp"

namespace nomacomp {

namespace {

constexpr std::array<HexCell, 6> kDirections{{{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}}};

HexCell rotate60(HexCell c) { return {-c.b, c.a + c.b}; }

struct LatticeShape {
    int i = 1;
    int j = 0;
    int size = 1;
};

// Smallest cluster size i^2 + ij + j^2 >= n, most compact (largest j) first.
LatticeShape lattice_for(int n) {
    for (int size = n;; ++size) {
        for (int j = size; j >= 0; --j) {
            for (int i = j; i * i <= size; ++i) {
                if (i >= 1 && i * i + i * j + j * j == size) {
                    return {i, j, size};
                }
            }
        }
    }
}

std::pair<int, int> coset_key(HexCell c, const LatticeShape& s) {
    const auto mod = [&](long v) { return static_cast<int>(((v % s.size) + s.size) % s.size); };
    const long x = static_cast<long>(s.i + s.j) * c.a + static_cast<long>(s.j) * c.b;
    const long y = -static_cast<long>(s.j) * c.a + static_cast<long>(s.i) * c.b;
    return {mod(x), mod(y)};
}

// Cells in spiral order: centre, ring 1, ring 2, ...
template <typename Visit>
void spiral(Visit&& visit) {
    if (!visit(HexCell{0, 0})) return;
    for (int k = 1;; ++k) {
        HexCell c{kDirections[4].a * k, kDirections[4].b * k};
        for (int side = 0; side < 6; ++side) {
            for (int step = 0; step < k; ++step) {
                if (!visit(c)) return;
                c = {c.a + kDirections[side].a, c.b + kDirections[side].b};
            }
        }
    }
}

}  // namespace

HexLayout::HexLayout(int rrh_count, double circumradius) : rrh_count_(rrh_count), circumradius_(circumradius) {
    if (rrh_count < 1) {
        throw ConfigError("rrh_count must be >= 1 (got " + std::to_string(rrh_count) + ")");
    }
    if (!(circumradius > 0.0)) {
        throw ConfigError("circumradius must be positive");
    }
    if (rrh_count == 1) {
        cells_.push_back({0, 0});
        return;
    }

    const LatticeShape shape = lattice_for(rrh_count);
    lattice_i_ = shape.i;
    lattice_j_ = shape.j;

    std::map<std::pair<int, int>, bool> used;
    spiral([&](HexCell c) {
        if (used.emplace(coset_key(c, shape), true).second) {
            cells_.push_back(c);
        }
        return static_cast<int>(cells_.size()) < shape.size;
    });

    HexCell t{shape.i, shape.j};
    for (int k = 0; k < 6; ++k) {
        translations_.push_back(cell_center(t));
        t = rotate60(t);
    }
}

Vec2 HexLayout::cell_center(HexCell c) const {
    const double d = inter_site_distance();
    return {d * (c.a + 0.5 * c.b), d * (std::sqrt(3.0) / 2.0) * c.b};
}

HexCell HexLayout::cell_containing(Vec2 p) const {
    const double d = inter_site_distance();
    const double b = p.y / (d * std::sqrt(3.0) / 2.0);
    const double a = p.x / d - 0.5 * b;
    const int a0 = static_cast<int>(std::floor(a));
    const int b0 = static_cast<int>(std::floor(b));
    HexCell best{a0, b0};
    double best_d = std::numeric_limits<double>::infinity();
    for (int da = -1; da <= 2; ++da) {
        for (int db = -1; db <= 2; ++db) {
            const HexCell c{a0 + da, b0 + db};
            const double dist = (p - cell_center(c)).norm();
            if (dist < best_d) {
                best_d = dist;
                best = c;
            }
        }
    }
    return best;
}

bool HexLayout::in_footprint(Vec2 p) const {
    const HexCell c = cell_containing(p);
    return std::find(cells_.begin(), cells_.end(), c) != cells_.end();
}

Vec2 HexLayout::wrap_offset(Vec2 from, Vec2 to) const {
    Vec2 best = to - from;
    double best_norm = best.norm();
    for (const Vec2& t : translations_) {
        const Vec2 cand = to + t - from;
        const double n = cand.norm();
        if (n < best_norm) {
            best_norm = n;
            best = cand;
        }
    }
    return best;
}

Vec2 HexLayout::wrap_position(Vec2 p) const {
    if (translations_.empty() || in_footprint(p)) {
        return p;
    }
    const LatticeShape shape{lattice_i_, lattice_j_, lattice_i_ * lattice_i_ + lattice_i_ * lattice_j_ + lattice_j_ * lattice_j_};
    const HexCell outside = cell_containing(p);
    const auto key = coset_key(outside, shape);
    for (const HexCell& c : cells_) {
        if (coset_key(c, shape) == key) {
            return p + (cell_center(c) - cell_center(outside));
        }
    }
    return p;  // unreachable: the footprint holds one cell per coset
}

bool HexLayout::in_hexagon(Vec2 p, Vec2 center, double r) {
    const double dx = std::abs(p.x - center.x);
    const double dy = std::abs(p.y - center.y);
    return dx <= std::sqrt(3.0) / 2.0 * r && dx / std::sqrt(3.0) + dy <= r;
}

LayoutResult build_layout(int rrh_count, double circumradius, const RrhParams& params) {
    if (!(params.tx_power_total_w > 0.0)) {
        throw ConfigError("RRH transmit power must be positive");
    }
    if (params.num_antennas < 1) {
        throw ConfigError("RRH needs at least one antenna");
    }
    HexLayout layout(rrh_count, circumradius);
    std::vector<Rrh> rrhs;
    rrhs.reserve(rrh_count);
    for (int id = 0; id < rrh_count; ++id) {
        rrhs.push_back(Rrh{id, layout.cell_center(layout.cells()[id]), params.tx_power_total_w, params.num_antennas,
                           params.antenna_gain_dbi});
    }
    return LayoutResult{std::move(layout), std::move(rrhs)};
}

std::vector<Ue> drop_ues(const HexLayout& layout, std::span<const Rrh> rrhs, int ues_per_cell, double speed_mps,
                         double ue_antenna_gain_dbi, TracedEngine& rng) {
    if (ues_per_cell < 1) {
        throw ConfigError("ues_per_cell must be >= 1");
    }
    if (speed_mps < 0.0) {
        throw ConfigError("UE speed must be non-negative");
    }
    const double r = layout.circumradius();
    const double half_width = std::sqrt(3.0) / 2.0 * r;
    std::uniform_real_distribution<double> ux(-half_width, half_width);
    std::uniform_real_distribution<double> uy(-r, r);
    std::uniform_real_distribution<double> heading(0.0, 2.0 * std::numbers::pi);

    std::vector<Ue> ues;
    ues.reserve(rrhs.size() * static_cast<std::size_t>(ues_per_cell));
    for (const Rrh& rrh : rrhs) {
        for (int k = 0; k < ues_per_cell; ++k) {
            Vec2 p;
            do {
                p = Vec2{rrh.position.x + ux(rng), rrh.position.y + uy(rng)};
            } while (!HexLayout::in_hexagon(p, rrh.position, r));
            const double theta = heading(rng);
            Ue ue;
            ue.id = static_cast<int>(ues.size());
            ue.position = p;
            ue.direction = {std::cos(theta), std::sin(theta)};
            ue.speed_mps = speed_mps;
            ue.serving_rrh = rrh.id;
            ue.antenna_gain_dbi = ue_antenna_gain_dbi;
            ues.push_back(ue);
        }
    }
    return ues;
}

void advance_mobility(const HexLayout& layout, std::span<Ue> ues, double dt) {
    if (!(dt > 0.0)) {
        throw InvalidInput("mobility step must be positive");
    }
    for (Ue& ue : ues) {
        if (ue.speed_mps == 0.0) continue;
        ue.position += ue.direction * (ue.speed_mps * dt);
        ue.position = layout.wrap_position(ue.position);
    }
}

std::vector<int> update_attachment(std::span<Ue> ues, std::span<const double> macro_v, int rrh_count) {
    if (macro_v.size() != ues.size() * static_cast<std::size_t>(rrh_count)) {
        throw InvalidInput("macro loss table does not cover every (UE, RRH) pair");
    }
    std::vector<int> handovers;
    for (std::size_t u = 0; u < ues.size(); ++u) {
        const double* row = macro_v.data() + u * rrh_count;
        int best = ues[u].serving_rrh;
        for (int l = 0; l < rrh_count; ++l) {
            if (row[l] < row[best]) best = l;
        }
        if (best != ues[u].serving_rrh) {
            ues[u].serving_rrh = best;
            handovers.push_back(ues[u].id);
        }
    }
    return handovers;
}

}  // namespace nomacomp
