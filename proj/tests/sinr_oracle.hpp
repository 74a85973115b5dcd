#pragma once

// Direct evaluation of every received stream for a one-RB scenario: pairing,
// beams, decode order, power split and CoMP beam choice are re-derived here
// without the library's PHY helpers, then each stream is classified as
// desired, cancelled or interference for each receiving UE.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nomacomp/coalition_evaluator.hpp"
#include "nomacomp/phy.hpp"
#include "nomacomp/tti_evaluator.hpp"

namespace nomacomp::test {

struct OracleCase {
    int rrh_count = 1;
    int antennas = 1;
    std::vector<int> group_size;  ///< UEs per RRH, at most 2 * antennas
    std::vector<int> edge_count;  ///< edge UEs per RRH, 0 or 1
};

struct OracleScenario {
    OracleCase setup;
    ChannelRealization channels;
    std::vector<int> serving;
    std::vector<RbGrid> grids;
    std::vector<char> edge;
    std::vector<int> rank;
    PhyParams phy;
};

struct OracleSinr {
    double useful = 0.0;
    double intrabeam = 0.0;
    double interbeam = 0.0;
    double intercell = 0.0;
    double noise = 0.0;
    double sinr = 0.0;
};

inline OracleScenario make_oracle_scenario(const OracleCase& c, std::mt19937_64& rng) {
    OracleScenario s;
    s.setup = c;
    const int L = c.rrh_count;
    const int U = std::accumulate(c.group_size.begin(), c.group_size.end(), 0);
    s.channels = ChannelRealization(U, L, c.antennas);
    std::normal_distribution<double> cn(0.0, std::sqrt(0.5));
    std::uniform_real_distribution<double> loss_db(60.0, 100.0);
    for (int u = 0; u < U; ++u) {
        for (int j = 0; j < L; ++j) {
            const double amp = std::sqrt(std::pow(10.0, -loss_db(rng) / 10.0));
            std::complex<double>* h = s.channels.mutable_h(u, j);
            for (int n = 0; n < c.antennas; ++n) {
                const double re = cn(rng);
                const double im = cn(rng);
                h[n] = amp * std::complex<double>(re, im);
            }
        }
    }
    s.channels.refresh_gains();

    s.serving.resize(U);
    s.edge.assign(U, 0);
    s.rank.assign(U, -1);
    std::vector<int> edges;
    int next = 0;
    for (int j = 0; j < L; ++j) {
        RbGrid g;
        g.num_rbs = 1;
        g.group_size = c.group_size[j];
        g.groups.resize(1);
        for (int k = 0; k < c.group_size[j]; ++k) {
            s.serving[next] = j;
            g.groups[0].push_back(next);
            ++next;
        }
        if (c.edge_count[j] > 0 && c.group_size[j] > 0) {
            std::uniform_int_distribution<int> pick(0, c.group_size[j] - 1);
            const int e = g.groups[0][pick(rng)];
            s.edge[e] = 1;
            edges.push_back(e);
        }
        std::shuffle(g.groups[0].begin(), g.groups[0].end(), rng);
        s.grids.push_back(std::move(g));
    }
    std::shuffle(edges.begin(), edges.end(), rng);
    for (std::size_t i = 0; i < edges.size(); ++i) s.rank[edges[i]] = static_cast<int>(i);

    s.phy.beam_power_w = 1.0 / (c.antennas * 12.0);
    s.phy.noise_w = 4.74e-16;
    s.phy.p_ftpc = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    return s;
}

/// Oracle SINR terms of every UE served by a member of `coalition`.
/// Where the oracle takes its beamformers from. The SINR terms are evaluated
/// independently either way; `pseudo_inverse` also replaces the library's
/// zero-forcing step, which agrees only to within eps * cond(H)^2.
enum class OracleBeams { library_zf, pseudo_inverse };

inline std::map<int, OracleSinr> oracle_sinrs(const OracleScenario& s, Mask coalition,
                                              OracleBeams beams = OracleBeams::library_zf) {
    using Row = Eigen::RowVectorXcd;
    const int L = s.setup.rrh_count;
    const int N = s.setup.antennas;
    const bool comp = std::popcount(coalition) >= 2;
    const auto h = [&](int u, int j) { return Row(s.channels.h(u, j)); };
    const auto gain = [&](int u, int j) { return h(u, j).squaredNorm(); };
    const auto corr = [&](const Row& a, const Row& b) {
        std::complex<double> ip = 0.0;
        for (int n = 0; n < N; ++n) ip += a(n) * std::conj(b(n));
        return std::abs(ip) / (a.norm() * b.norm());
    };

    struct Cluster {
        std::vector<int> members;
        std::vector<double> coeffs;
    };
    std::vector<std::vector<Cluster>> clusters(L);
    std::vector<Eigen::MatrixXcd> w(L);
    std::vector<std::vector<int>> strong(L);

    for (int j = 0; j < L; ++j) {
        std::vector<int> ids = s.grids[j].groups.empty() ? std::vector<int>{} : s.grids[j].groups[0];
        if (ids.empty()) continue;
        std::sort(ids.begin(), ids.end(), [&](int a, int b) {
            return gain(a, j) != gain(b, j) ? gain(a, j) > gain(b, j) : a < b;
        });
        const std::size_t n_strong = (ids.size() + 1) / 2;
        std::vector<int> weak(ids.begin() + static_cast<long>(n_strong), ids.end());
        std::vector<char> used(weak.size(), 0);
        for (std::size_t i = 0; i < n_strong; ++i) {
            Cluster c;
            c.members.push_back(ids[i]);
            int best = -1;
            double best_c = -1.0;
            for (std::size_t k = 0; k < weak.size(); ++k) {
                if (used[k]) continue;
                const double v = corr(h(ids[i], j), h(weak[k], j));
                if (v > best_c) {
                    best_c = v;
                    best = static_cast<int>(k);
                }
            }
            if (best >= 0) {
                used[best] = 1;
                c.members.push_back(weak[best]);
            }
            strong[j].push_back(ids[i]);
            clusters[j].push_back(c);
        }
        Eigen::MatrixXcd H(static_cast<Eigen::Index>(n_strong), N);
        for (std::size_t i = 0; i < n_strong; ++i) H.row(static_cast<Eigen::Index>(i)) = h(strong[j][i], j);
        if (beams == OracleBeams::library_zf) {
            w[j] = zf_beamformers(H, s.phy.zf_condition_limit).w;
        } else {
            Eigen::MatrixXcd W = H.completeOrthogonalDecomposition().pseudoInverse();
            for (Eigen::Index n = 0; n < W.cols(); ++n) W.col(n) /= W.col(n).norm();
            w[j] = W;
        }
    }

    // Edge UEs of coalition members join one beam of every other member.
    if (comp) {
        for (int e = 0; e < static_cast<int>(s.serving.size()); ++e) {
            if (!s.edge[e] || !(coalition & bit(s.serving[e]))) continue;
            for (int j = 0; j < L; ++j) {
                if (j == s.serving[e] || !(coalition & bit(j)) || clusters[j].empty()) continue;
                int best = 0;
                double best_c = -1.0;
                for (std::size_t n = 0; n < strong[j].size(); ++n) {
                    const double v = corr(h(e, j), h(strong[j][n], j));
                    if (v > best_c) {
                        best_c = v;
                        best = static_cast<int>(n);
                    }
                }
                clusters[j][best].members.push_back(e);
            }
        }
    }
    for (int j = 0; j < L; ++j) {
        const bool grown = comp && (coalition & bit(j));
        for (Cluster& c : clusters[j]) {
            std::sort(c.members.begin(), c.members.end(), [&](int a, int b) {
                if (grown) {
                    if (s.edge[a] != s.edge[b]) return s.edge[a] > s.edge[b];
                    if (s.edge[a]) return s.rank[a] < s.rank[b];
                }
                return gain(a, j) != gain(b, j) ? gain(a, j) < gain(b, j) : a < b;
            });
            double total = 0.0;
            for (const int m : c.members) total += std::pow(gain(m, j), -s.phy.p_ftpc);
            for (const int m : c.members) c.coeffs.push_back(std::pow(gain(m, j), -s.phy.p_ftpc) / total);
        }
    }

    std::map<int, OracleSinr> out;
    const double P = s.phy.beam_power_w;
    for (int u = 0; u < static_cast<int>(s.serving.size()); ++u) {
        const int l = s.serving[u];
        if (!(coalition & bit(l))) continue;
        OracleSinr r;
        for (int j = 0; j < L; ++j) {
            for (std::size_t n = 0; n < clusters[j].size(); ++n) {
                std::complex<double> hw = 0.0;
                for (int a = 0; a < N; ++a) hw += s.channels.h(u, j)(a) * w[j](a, static_cast<Eigen::Index>(n));
                const double g = std::norm(hw);
                const Cluster& c = clusters[j][n];
                const auto pos = std::find(c.members.begin(), c.members.end(), u);
                const bool member = pos != c.members.end();
                const std::size_t k_u = member ? static_cast<std::size_t>(pos - c.members.begin()) : 0;
                for (std::size_t k = 0; k < c.members.size(); ++k) {
                    const double p = g * c.coeffs[k] * P;
                    if (member && k == k_u) {
                        r.useful += p;
                    } else if (member && k < k_u) {
                        // cancelled before u decodes its own stream
                    } else if (j == l && member) {
                        r.intrabeam += p;
                    } else if (j == l) {
                        r.interbeam += p;
                    } else {
                        r.intercell += p;
                    }
                }
            }
        }
        r.noise = s.phy.noise_w;
        r.sinr = r.useful / (r.intrabeam + r.interbeam + r.intercell + r.noise);
        out[u] = r;
    }
    return out;
}

/// Largest relative disagreement between the pipeline and the oracle for one
/// coalition. Each interference term is measured against the total
/// interference-plus-noise, since ZF nulls leave terms at rounding level.
inline double oracle_max_error(const OracleScenario& s, Mask coalition,
                               OracleBeams beams = OracleBeams::library_zf) {
    TtiEvaluator eval(s.channels, s.serving, s.grids, s.phy);
    eval.set_edge(s.edge, s.rank);
    const std::vector<SinrBreakdown> got = eval.slot_sinrs(coalition);
    const std::map<int, OracleSinr> want = oracle_sinrs(s, coalition, beams);
    double worst = 0.0;
    std::size_t seen = 0;
    for (std::size_t i = 0; i < eval.slots().size(); ++i) {
        const Slot& sl = eval.slots()[i];
        if (!(coalition & bit(sl.rrh))) continue;
        const OracleSinr& o = want.at(sl.ue);
        const SinrBreakdown& b = got[i];
        const double denom = o.intrabeam + o.interbeam + o.intercell + o.noise;
        const auto rel = [](double a, double ref, double scale) { return std::abs(a - ref) / scale; };
        worst = std::max(worst, rel(b.useful, o.useful, std::max(o.useful, 1e-300)));
        worst = std::max(worst, rel(b.intrabeam, o.intrabeam, denom));
        worst = std::max(worst, rel(b.interbeam, o.interbeam, denom));
        worst = std::max(worst, rel(b.intercell, o.intercell, denom));
        worst = std::max(worst, rel(b.interference() + b.noise, denom, denom));
        worst = std::max(worst, rel(b.sinr, o.sinr, std::max(o.sinr, 1e-300)));
        ++seen;
    }
    if (seen != want.size()) return std::numeric_limits<double>::infinity();
    return worst;
}

/// Every configuration with L <= 2, N <= 2 and at most one edge UE per RRH,
/// so no cluster grows beyond three members.
inline std::vector<OracleCase> oracle_cases() {
    std::vector<OracleCase> out;
    for (int L = 1; L <= 2; ++L) {
        for (int N = 1; N <= 2; ++N) {
            const int max_group = 2 * N;
            const int lo = 0;
            for (int g0 = 1; g0 <= max_group; ++g0) {
                for (int g1 = lo; g1 <= (L == 2 ? max_group : 0); ++g1) {
                    for (int e0 = 0; e0 <= 1; ++e0) {
                        for (int e1 = 0; e1 <= (L == 2 && g1 > 0 ? 1 : 0); ++e1) {
                            OracleCase c;
                            c.rrh_count = L;
                            c.antennas = N;
                            c.group_size = {g0};
                            c.edge_count = {e0};
                            if (L == 2) {
                                c.group_size.push_back(g1);
                                c.edge_count.push_back(e1);
                            }
                            out.push_back(c);
                        }
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace nomacomp::test
