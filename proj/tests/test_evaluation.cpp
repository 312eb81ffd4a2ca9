#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "passfeas/data_io.hpp"
#include "passfeas/error.hpp"
#include "passfeas/evaluation.hpp"
#include "test_support.hpp"

using namespace passfeas;
using testing::player;

namespace {

Scenario three_rows(double passer_x, const std::array<double, 3>& rows, AttackDirection dir = AttackDirection::PositiveX) {
    Scenario s;
    s.field.attack_direction = dir;
    s.passer = player("p", passer_x, 34, 0.0);
    s.receivers = {player("r", 50, 20, 180.0)};
    const int per_row[3] = {4, 4, 2};
    int id = 0;
    for (int row = 0; row < 3; ++row) {
        for (int k = 0; k < per_row[row]; ++k) {
            const double jitter = (k % 2 ? 0.6 : -0.6);
            s.defenders.push_back(player("d" + std::to_string(id++), rows[row] + jitter, 10.0 + 12.0 * k));
        }
    }
    return s;
}

}  // namespace

TEST_CASE("Top-X accuracy") {
    const std::vector<RankResult> results = {
        {0, 1, true}, {1, 2, true}, {2, 4, true}, {3, 1, false}, {4, 5, false}};
    const TopX t1 = topx_accuracy(results, 1);
    CHECK(*t1.succ == doctest::Approx(1.0 / 3.0));
    CHECK(*t1.nsucc == 0.5);
    const TopX t3 = topx_accuracy(results, 3);
    CHECK(*t3.succ == doctest::Approx(2.0 / 3.0));
    CHECK(*t3.nsucc == 0.5);
    CHECK(topx_accuracy(results, 10).succ == 1.0);
    CHECK_THROWS_AS(topx_accuracy(results, 0), Error);

    const TopX none = topx_accuracy({}, 1);
    CHECK_FALSE(none.succ.has_value());
    CHECK_FALSE(none.nsucc.has_value());

    SUBCASE("monotone in X and equal to a direct count") {
        std::mt19937_64 rng(21);
        std::uniform_int_distribution<std::size_t> rank(1, 10);
        std::bernoulli_distribution ok(0.7);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<RankResult> rs;
            for (std::size_t i = 0; i < 40; ++i) rs.push_back({i, rank(rng), ok(rng)});
            double prev = -1.0;
            for (std::size_t x = 1; x <= 10; ++x) {
                const TopX t = topx_accuracy(rs, x);
                std::size_t n = 0, hit = 0;
                for (const auto& r : rs) {
                    if (!r.success) continue;
                    ++n;
                    hit += r.rank <= x;
                }
                if (n) {
                    CHECK(*t.succ == static_cast<double>(hit) / static_cast<double>(n));
                    CHECK(*t.succ >= prev);
                    prev = *t.succ;
                }
            }
        }
    }
}

TEST_CASE("rank histogram partitions the results") {
    std::vector<RankResult> rs;
    for (std::size_t i = 0; i < 30; ++i) rs.push_back({i, 1 + i % 11, i % 4 != 0});
    const auto [succ, nsucc] = rank_histogram(rs);
    CHECK(succ.successful);
    CHECK_FALSE(nsucc.successful);
    CHECK(succ.total() + nsucc.total() == rs.size());
    std::size_t ones = 0;
    for (const auto& r : rs) ones += (r.rank == 1 && r.success);
    CHECK(succ.bins[0] == ones);
    CHECK(succ.overflow + nsucc.overflow == 4);  // ranks 10 and 11
}

TEST_CASE("phase classification") {
    const std::array<double, 3> rows{20, 40, 60};
    CHECK(classify_phase(three_rows(10, rows)) == Phase::BuildUp);
    CHECK(classify_phase(three_rows(41, rows)) == Phase::Progression);
    CHECK(classify_phase(three_rows(70, rows)) == Phase::Finalization);

    const auto centers = defensive_rows(three_rows(41, rows));
    CHECK(centers[0] == doctest::Approx(20));
    CHECK(centers[1] == doctest::Approx(40));
    CHECK(centers[2] == doctest::Approx(60));

    SUBCASE("attacking toward -x flips depth") {
        const std::array<double, 3> mirrored{105 - 20, 105 - 40, 105 - 60};
        CHECK(classify_phase(three_rows(105 - 10, mirrored, AttackDirection::NegativeX)) == Phase::BuildUp);
        CHECK(classify_phase(three_rows(105 - 70, mirrored, AttackDirection::NegativeX)) == Phase::Finalization);
    }

    SUBCASE("goalkeeper does not form a row") {
        Scenario s = three_rows(10, rows);
        PlayerState gk = player("gk", 100, 34);
        gk.role = Role::Goalkeeper;
        s.defenders.pop_back();
        s.defenders.push_back(gk);
        CHECK(defensive_rows(s)[2] < 65);
    }

    SUBCASE("independent of defender order and lateral positions") {
        Scenario s = three_rows(41, rows);
        std::reverse(s.defenders.begin(), s.defenders.end());
        for (auto& d : s.defenders) d.position.y = 68 - d.position.y;
        CHECK(classify_phase(s) == Phase::Progression);
    }

    SUBCASE("too few defenders") {
        Scenario s = three_rows(41, rows);
        s.defenders.resize(2);
        CHECK_THROWS_WITH_AS(classify_phase(s), doctest::Contains("insufficient"), Error);
    }
}

TEST_CASE("split report") {
    const ModelParams params;
    SynthConfig cfg;
    cfg.seed = 3;
    cfg.n_events = 60;
    cfg.planted_best = false;
    cfg.temperature = 0.1;
    std::vector<Scenario> scenarios = generate_synthetic(cfg, params);

    SUBCASE("no split covers every event in every mode") {
        const Report r = split_report(scenarios, params, {ScoreMode::F, ScoreMode::Fpd}, SplitKind::None);
        REQUIRE(r.rows.size() == 2);
        CHECK(r.rows[0].split_class == "all");
        CHECK(r.rows[0].n_events == 60);
        CHECK(r.rows[1].n_events == 60);
        CHECK(r.rows[0].mode == ScoreMode::F);
        CHECK(r.rows[1].mode == ScoreMode::Fpd);
        const auto direct = topx_accuracy(rank_results(scenarios, params, ScoreMode::Fpd), 1);
        CHECK(r.rows[1].top1.succ == direct.succ);
        CHECK(r.rows[1].top1.nsucc == direct.nsucc);
    }

    SUBCASE("position and phase splits partition the events") {
        for (SplitKind split : {SplitKind::Position, SplitKind::Phase}) {
            const Report r = split_report(scenarios, params, {ScoreMode::F, ScoreMode::Fpd}, split);
            std::size_t total_f = 0, total_pd = 0;
            std::set<std::string> classes;
            for (const auto& row : r.rows) {
                (row.mode == ScoreMode::F ? total_f : total_pd) += row.n_events;
                classes.insert(row.split_class);
                CHECK(row.succ_hist.total() + row.nsucc_hist.total() == row.n_events);
            }
            CHECK(total_f == 60);
            CHECK(total_pd == 60);
            CHECK(r.rows.size() == 2 * classes.size());
        }
    }

    SUBCASE("events without ground truth or role are reported") {
        scenarios[0].ground_truth_receiver.reset();
        scenarios[1].passer.role.reset();
        const Report none = split_report(scenarios, params, {ScoreMode::F}, SplitKind::None);
        CHECK(none.rows[0].n_events == 59);
        CHECK(none.warnings.size() == 1);
        const Report pos = split_report(scenarios, params, {ScoreMode::F}, SplitKind::Position);
        CHECK(pos.warnings.size() == 2);
    }

    SUBCASE("CSV is deterministic and leaves absent classes empty") {
        const Report r = split_report(scenarios, params, {ScoreMode::F}, SplitKind::None);
        std::ostringstream a, b;
        write_report_csv(a, r);
        write_report_csv(b, split_report(scenarios, params, {ScoreMode::F}, SplitKind::None));
        CHECK(a.str() == b.str());
        CHECK(a.str().rfind("split_class,mode,top1_succ,top1_nsucc,top3_succ,top3_nsucc,n_events\n", 0) == 0);
        CHECK(format_fraction(std::nullopt).empty());
        CHECK(format_fraction(0.5) == "0.500000");
    }

    SUBCASE("histogram chart") {
        const Report r = split_report(scenarios, params, {ScoreMode::F}, SplitKind::None);
        const std::string svg = render_histogram_svg(r.rows[0].succ_hist, r.rows[0].nsucc_hist, "all F");
        CHECK(svg.rfind("<svg", 0) == 0);
        CHECK(svg.find("#1f77b4") != std::string::npos);
        CHECK(svg.find("#ff7f0e") != std::string::npos);
    }

    CHECK_THROWS_AS(split_report(scenarios, params, {}, SplitKind::None), Error);
    CHECK(parse_split("phase") == SplitKind::Phase);
    CHECK_FALSE(parse_split("team").has_value());
}
