#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "passfeas/epv.hpp"
#include "passfeas/error.hpp"
#include "test_support.hpp"

using namespace passfeas;
using testing::player;

namespace {

ValueMap constant_map(double v) {
    return make_value_map(kValueMapWidth, kValueMapHeight, std::vector<double>(kValueMapWidth * kValueMapHeight, v));
}

ValueMap random_map(std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(0.0, scale);
    std::vector<double> v(kValueMapWidth * kValueMapHeight);
    for (auto& x : v) x = u(rng);
    return make_value_map(kValueMapWidth, kValueMapHeight, std::move(v));
}

}  // namespace

TEST_CASE("cell centers") {
    const FieldSpec f{};
    const Point2 c = cell_center(0, 0, 104, 68, f);
    CHECK(c.x == doctest::Approx(0.5 * 105.0 / 104.0));
    CHECK(c.y == doctest::Approx(0.5));
    CHECK(cell_center(103, 67, 104, 68, f).x == doctest::Approx(105 - 0.5 * 105.0 / 104.0));
}

TEST_CASE("receiver region") {
    const FieldSpec f{};
    const ValueMap m = constant_map(0.0);

    SUBCASE("contains the receiver cell") {
        const auto reg = receiver_region({10, 10}, {50.3, 30.7}, m, f);
        const std::size_t own = 30 * 104 + static_cast<std::size_t>(50.3 / (105.0 / 104.0));
        CHECK(std::binary_search(reg.cells.begin(), reg.cells.end(), own));
        CHECK(std::is_sorted(reg.cells.begin(), reg.cells.end()));
        CHECK(reg.disc_radius == doctest::Approx(5.0 * 105.0 / 104.0));
        CHECK(reg.tube_width == doctest::Approx(2.0 * 105.0 / 104.0));
    }

    SUBCASE("grows with pass length") {
        std::size_t prev = 0;
        for (double x = 15; x <= 95; x += 10) {
            const auto reg = receiver_region({10, 34}, {x, 34}, m, f);
            CHECK(reg.cells.size() >= prev);
            prev = reg.cells.size();
        }
    }

    SUBCASE("a huge disc saturates the map") {
        CHECK(receiver_region({10, 34}, {50, 34}, m, f, 2.0, 0.01).cells.size() == 104 * 68);
    }

    SUBCASE("matches a full scan") {
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> ux(-5, 110), uy(-5, 73);
        for (int i = 0; i < 200; ++i) {
            const Point2 p{ux(rng), uy(rng)}, r{ux(rng), uy(rng)};
            const auto expected = oracle::region_cells(p, r, 104, 68, f, kDefaultDiscRadius, kDefaultTubeWidth);
            if (expected.empty()) {
                CHECK_THROWS_AS(receiver_region(p, r, m, f), Error);
            } else {
                CHECK(receiver_region(p, r, m, f).cells == expected);
            }
        }
    }

    CHECK_THROWS_WITH_AS(receiver_region({400, 400}, {300, 300}, m, f), doctest::Contains("outside"), Error);
    CHECK_THROWS_AS(receiver_region({4, 4}, {4, 4}, m, f), Error);
}

TEST_CASE("map value") {
    const FieldSpec f{};

    SUBCASE("uniform map gives its constant exactly") {
        const ValueMap m = constant_map(0.015);
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> ux(0, 105), uy(0, 68);
        for (int i = 0; i < 100; ++i) {
            const auto reg = receiver_region({ux(rng), uy(rng)}, {ux(rng), uy(rng)}, m, f);
            CHECK(map_value(reg, m) == 0.015);
        }
    }

    SUBCASE("single hot cell") {
        std::vector<double> v(104 * 68, 0.0);
        const auto reg = receiver_region({10, 34}, {40, 34}, constant_map(0), f);
        v[reg.cells[reg.cells.size() / 2]] = 1.0;
        const ValueMap m = make_value_map(104, 68, v);
        CHECK(map_value(reg, m) == doctest::Approx(1.0 / static_cast<double>(reg.cells.size())).epsilon(1e-14));
    }

    SUBCASE("random maps agree with the cell-sum oracle") {
        std::mt19937_64 rng(19);
        std::uniform_real_distribution<double> ux(0, 105), uy(0, 68);
        for (int i = 0; i < 100; ++i) {
            const ValueMap m = random_map(rng);
            const Point2 p{ux(rng), uy(rng)}, r{ux(rng), uy(rng)};
            const auto cells = oracle::region_cells(p, r, 104, 68, f, kDefaultDiscRadius, kDefaultTubeWidth);
            const double v = map_value(receiver_region(p, r, m, f), m);
            CHECK(v == oracle::cell_mean_offset(m, cells));
            CHECK(v == doctest::Approx(oracle::cell_mean(m, cells)).epsilon(1e-12));
            double lo = 1e300, hi = -1e300;
            for (auto c : cells) {
                lo = std::min(lo, m.values[c]);
                hi = std::max(hi, m.values[c]);
            }
            CHECK(v >= lo);
            CHECK(v <= hi);
        }
    }

    SUBCASE("dimension mismatch") {
        const auto reg = receiver_region({10, 34}, {40, 34}, constant_map(0), f);
        CHECK_THROWS_AS(map_value(reg, make_value_map(2, 2, {0, 0, 0, 0})), Error);
    }
}

TEST_CASE("combining value maps with orientation") {
    const ModelParams params;

    SUBCASE("scaling the map scales V and keeps the ranking") {
        std::mt19937_64 rng(41);
        for (int i = 0; i < 20; ++i) {
            const Scenario s = testing::random_scenario(rng);
            const ValueMap m = random_map(rng, 0.05);
            for (double lambda : {0.5, 3.0, 7.25}) {
                ValueMap scaled = m;
                for (auto& x : scaled.values) x *= lambda;
                const auto a = combine_with_orientation(s, m, params, ValueKind::PassProbability);
                const auto b = combine_with_orientation(s, scaled, params, ValueKind::PassProbability);
                for (std::size_t k = 0; k < a.entries.size(); ++k) {
                    CHECK(b.entries[k].value == doctest::Approx(lambda * a.entries[k].value).epsilon(1e-12));
                }
                CHECK(a.ranking == b.ranking);
                CHECK(a.value_ranking == b.value_ranking);
            }
        }
    }

    SUBCASE("uniform map ranks by orientation") {
        std::mt19937_64 rng(42);
        for (int i = 0; i < 20; ++i) {
            const Scenario s = testing::random_scenario(rng);
            const auto e = combine_with_orientation(s, constant_map(0.015), params, ValueKind::Epv);
            const auto fo = evaluate_scenario(s, params, ScoreMode::Fo);
            CHECK(e.ranking == fo.ranking);
            for (const auto& entry : e.entries) CHECK(entry.value == 0.015);
        }
    }

    SUBCASE("entries match independent recomputation") {
        std::mt19937_64 rng(43);
        for (int i = 0; i < 50; ++i) {
            const Scenario s = testing::random_scenario(rng);
            const ValueMap m = random_map(rng);
            const auto e = combine_with_orientation(s, m, params, ValueKind::PassProbability);
            for (std::size_t k = 0; k < s.receivers.size(); ++k) {
                const auto cells = oracle::region_cells(s.passer.position, s.receivers[k].position, 104, 68, s.field,
                                                        kDefaultDiscRadius, kDefaultTubeWidth);
                CHECK(e.entries[k].cell_count == cells.size());
                CHECK(e.entries[k].value == oracle::cell_mean_offset(m, cells));
                CHECK(e.entries[k].F_o == orientation_feasibility(s.passer, s.receivers[k], params));
                CHECK(e.entries[k].product == e.entries[k].value * e.entries[k].F_o);
                if (e.entries[k].F_o == 0.0) CHECK(e.entries[k].product == 0.0);
            }
        }
    }

    CHECK(parse_value_kind("VE") == ValueKind::Epv);
    CHECK(to_string(ValueKind::PassProbability) == "VP");
    CHECK_FALSE(parse_value_kind("xx").has_value());
}
