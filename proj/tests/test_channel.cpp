#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "nomacomp/channel.hpp"
#include "nomacomp/errors.hpp"
#include "nomacomp/rng.hpp"
#include "nomacomp/topology.hpp"

using namespace nomacomp;

TEST_CASE("pathloss") {
    const PathlossModel m;
    CHECK(m.pathloss_db(10.0, 5.0) == doctest::Approx(63.7).epsilon(1e-12));
    CHECK(m.pathloss_db(100.0, 3.5) == doctest::Approx(45.4 + 41.0 + 20.0 * std::log10(0.7)).epsilon(1e-12));
    CHECK(m.pathloss_db(100.0, 3.5) == doctest::Approx(83.30).epsilon(1e-4));
    CHECK(m.pathloss_db(5.0, 3.5) == m.pathloss_db(10.0, 3.5));
    CHECK_THROWS_AS(m.pathloss_db(std::nan(""), 3.5), InvalidInput);
    CHECK_THROWS_AS(m.pathloss_db(10.0, 0.0), InvalidInput);
}

TEST_CASE("shadowing statistics") {
    TracedEngine zero(1);
    for (int i = 0; i < 100; ++i) CHECK(draw_shadowing(0.0, zero) == 0.0);
    TracedEngine rng(42);
    const int n = 100000;
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = draw_shadowing(4.0, rng);
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sq / n - mean * mean);
    CHECK(std::abs(mean) < 0.05);
    CHECK(std::abs(sd - 4.0) < 0.05);
}

TEST_CASE("fading power follows macro loss") {
    for (const double v : {0.0, 10.0}) {
        MacroLossTable macro(1, 1);
        MacroLoss ml;
        ml.v_db = v;
        macro.set(0, 0, ml);
        TracedEngine rng(7);
        const int draws = 200000;
        double sum = 0.0;
        for (int i = 0; i < draws; ++i) sum += realize_channels(macro, 4, rng).gain(0, 0);
        const double want = 4.0 * std::pow(10.0, -v / 10.0);
        CHECK(sum / draws == doctest::Approx(want).epsilon(0.01));
    }
    MacroLossTable macro(2, 3);
    TracedEngine a(9);
    TracedEngine b(9);
    const ChannelRealization ra = realize_channels(macro, 2, a);
    const ChannelRealization rb = realize_channels(macro, 2, b);
    for (int u = 0; u < 2; ++u) {
        for (int j = 0; j < 3; ++j) {
            CHECK((ra.h(u, j).array() == rb.h(u, j).array()).all());
            CHECK(ra.gain(u, j) == doctest::Approx(ra.h(u, j).squaredNorm()).epsilon(1e-15));
        }
    }
}

TEST_CASE("noise power") {
    const double w = noise_power_w(15e3);
    CHECK(linear_to_db(w * 1e3) == doctest::Approx(-174.0 + 9.0 + 10.0 * std::log10(15e3)).epsilon(1e-12));
    CHECK(w == doctest::Approx(4.74e-16).epsilon(0.002));
    CHECK(linear_to_db(noise_power_w(1.0) * 1e3) == doctest::Approx(-165.0).epsilon(1e-12));
    CHECK(linear_to_db(noise_power_w(30e3) / noise_power_w(15e3)) == doctest::Approx(3.0103).epsilon(1e-4));
}

TEST_CASE("macro losses combine pathloss, shadowing and gains") {
    const LayoutResult net = build_layout(7, 125.0);
    TracedEngine rng(5);
    const std::vector<Ue> ues = drop_ues(net.layout, net.rrhs, 2, 0.0, 0.0, rng);
    std::vector<double> shadow(ues.size() * 7);
    std::iota(shadow.begin(), shadow.end(), 0.0);
    const PathlossModel m;
    const MacroLossTable t = compute_macro_losses(net.layout, ues, net.rrhs, shadow, m, 3.5);
    for (const Ue& u : ues) {
        for (int j = 0; j < 7; ++j) {
            const double d = net.layout.wrap_distance(u.position, net.rrhs[j].position);
            const double want = m.pathloss_db(d, 3.5) + shadow[u.id * 7 + j] - 8.17 - 0.0;
            CHECK(t.v(u.id, j) == doctest::Approx(want).epsilon(1e-12));
            CHECK(t.at(u.id, j).v_db == t.v(u.id, j));
        }
    }
}
