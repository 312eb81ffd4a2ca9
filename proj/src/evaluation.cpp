#include "passfeas/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "passfeas/error.hpp"

namespace passfeas {

namespace {

constexpr int kMaxKMeansIterations = 100;

double quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

struct MultiRank {
    std::size_t scenario_index;
    bool success;
    std::vector<std::size_t> rank_per_mode;
};

std::vector<MultiRank> rank_all_modes(const std::vector<Scenario>& scenarios, const ModelParams& params,
                                      const std::vector<ScoreMode>& modes, std::size_t& skipped) {
    const bool need_orientation =
        std::any_of(modes.begin(), modes.end(), [](ScoreMode m) { return needs_orientation(m); });
    const ScoreMode primary = need_orientation ? ScoreMode::F : ScoreMode::Fpd;
    std::vector<MultiRank> out;
    skipped = 0;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const Scenario& s = scenarios[i];
        if (!s.ground_truth_receiver) {
            ++skipped;
            continue;
        }
        const ScenarioEvaluation eval = evaluate_scenario(s, params, primary);
        MultiRank mr{i, s.success.value_or(true), {}};
        for (ScoreMode mode : modes) {
            std::vector<double> scores;
            scores.reserve(eval.breakdowns.size());
            for (const auto& b : eval.breakdowns) scores.push_back(b.score(mode));
            const auto order = rank_receivers(eval.breakdowns, scores);
            std::size_t rank = 0;
            for (std::size_t pos = 0; pos < order.size(); ++pos) {
                if (eval.breakdowns[order[pos]].receiver_id == *s.ground_truth_receiver) rank = pos + 1;
            }
            mr.rank_per_mode.push_back(rank);
        }
        out.push_back(std::move(mr));
    }
    return out;
}

std::string position_class(const Scenario& s) { return std::string(to_string(*s.passer.role)); }

}  // namespace

TopX topx_accuracy(const std::vector<RankResult>& results, std::size_t x) {
    if (x < 1) throw Error("Top-X needs X >= 1");
    std::size_t n_succ = 0, hit_succ = 0, n_nsucc = 0, hit_nsucc = 0;
    for (const auto& r : results) {
        if (r.success) {
            ++n_succ;
            if (r.rank <= x) ++hit_succ;
        } else {
            ++n_nsucc;
            if (r.rank <= x) ++hit_nsucc;
        }
    }
    TopX out;
    if (n_succ) out.succ = static_cast<double>(hit_succ) / static_cast<double>(n_succ);
    if (n_nsucc) out.nsucc = static_cast<double>(hit_nsucc) / static_cast<double>(n_nsucc);
    return out;
}

std::size_t RankHistogram::total() const {
    std::size_t sum = overflow;
    for (auto b : bins) sum += b;
    return sum;
}

std::pair<RankHistogram, RankHistogram> rank_histogram(const std::vector<RankResult>& results) {
    RankHistogram succ;
    RankHistogram nsucc;
    succ.successful = true;
    nsucc.successful = false;
    for (const auto& r : results) {
        RankHistogram& h = r.success ? succ : nsucc;
        if (r.rank >= 1 && r.rank <= kHistogramBins) {
            ++h.bins[r.rank - 1];
        } else {
            ++h.overflow;
        }
    }
    return {succ, nsucc};
}

std::string_view to_string(Phase phase) {
    switch (phase) {
        case Phase::BuildUp: return "build_up";
        case Phase::Progression: return "progression";
        case Phase::Finalization: return "finalization";
    }
    return "?";
}

std::array<double, 3> defensive_rows(const Scenario& scenario) {
    std::vector<double> depths;
    for (const auto& d : scenario.defenders) {
        if (d.role == Role::Goalkeeper) continue;
        depths.push_back(scenario.field.depth(d.position));
    }
    if (depths.size() < 3) throw Error("insufficient defenders for phase clustering");
    std::sort(depths.begin(), depths.end());

    std::array<double, 3> centers = {quantile(depths, 1.0 / 6.0), quantile(depths, 3.0 / 6.0),
                                     quantile(depths, 5.0 / 6.0)};
    std::vector<int> assign(depths.size(), -1);
    for (int iter = 0; iter < kMaxKMeansIterations; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < depths.size(); ++i) {
            int best = 0;
            for (int c = 1; c < 3; ++c) {
                if (std::abs(depths[i] - centers[c]) < std::abs(depths[i] - centers[best])) best = c;
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        if (!changed) break;
        std::array<double, 3> sum{};
        std::array<std::size_t, 3> count{};
        for (std::size_t i = 0; i < depths.size(); ++i) {
            sum[assign[i]] += depths[i];
            ++count[assign[i]];
        }
        for (int c = 0; c < 3; ++c) {
            if (count[c]) centers[c] = sum[c] / static_cast<double>(count[c]);
        }
    }
    std::sort(centers.begin(), centers.end());
    return centers;
}

Phase classify_phase(const Scenario& scenario) {
    const auto rows = defensive_rows(scenario);
    const double passer = scenario.field.depth(scenario.passer.position);
    if (passer < rows[0]) return Phase::BuildUp;
    if (passer > rows[2]) return Phase::Finalization;
    return Phase::Progression;
}

std::vector<RankResult> rank_results(const std::vector<Scenario>& scenarios, const ModelParams& params,
                                     ScoreMode mode) {
    std::size_t skipped = 0;
    std::vector<RankResult> out;
    for (const auto& mr : rank_all_modes(scenarios, params, {mode}, skipped)) {
        out.push_back({mr.scenario_index, mr.rank_per_mode.front(), mr.success});
    }
    return out;
}

std::string_view to_string(SplitKind split) {
    switch (split) {
        case SplitKind::None: return "none";
        case SplitKind::Position: return "position";
        case SplitKind::Phase: return "phase";
    }
    return "?";
}

std::optional<SplitKind> parse_split(std::string_view text) {
    if (text == "none") return SplitKind::None;
    if (text == "position") return SplitKind::Position;
    if (text == "phase") return SplitKind::Phase;
    return std::nullopt;
}

Report split_report(const std::vector<Scenario>& scenarios, const ModelParams& params,
                    const std::vector<ScoreMode>& modes, SplitKind split) {
    if (modes.empty()) throw Error("report needs at least one mode");
    Report report;
    report.split = split;
    std::size_t skipped = 0;
    const std::vector<MultiRank> ranks = rank_all_modes(scenarios, params, modes, skipped);
    if (skipped) {
        report.warnings.push_back(std::to_string(skipped) + " event(s) without ground truth skipped");
    }

    std::vector<std::string> class_order;
    switch (split) {
        case SplitKind::None: class_order = {"all"}; break;
        case SplitKind::Position: class_order = {"defender", "midfielder", "forward", "goalkeeper"}; break;
        case SplitKind::Phase: class_order = {"build_up", "progression", "finalization"}; break;
    }
    std::map<std::string, std::vector<const MultiRank*>> by_class;
    std::size_t missing_role = 0;
    std::size_t unclassified = 0;
    for (const auto& mr : ranks) {
        const Scenario& s = scenarios[mr.scenario_index];
        std::string cls;
        if (split == SplitKind::None) {
            cls = "all";
        } else if (split == SplitKind::Position) {
            if (!s.passer.role) {
                ++missing_role;
                continue;
            }
            cls = position_class(s);
        } else {
            try {
                cls = std::string(to_string(classify_phase(s)));
            } catch (const Error&) {
                ++unclassified;
                continue;
            }
        }
        by_class[cls].push_back(&mr);
    }
    if (missing_role) {
        report.warnings.push_back(std::to_string(missing_role) +
                                  " event(s) without passer role excluded from position split");
    }
    if (unclassified) {
        report.warnings.push_back(std::to_string(unclassified) +
                                  " event(s) with fewer than 3 defenders excluded from phase split");
    }

    for (const auto& cls : class_order) {
        auto it = by_class.find(cls);
        if (it == by_class.end()) continue;
        for (std::size_t m = 0; m < modes.size(); ++m) {
            std::vector<RankResult> results;
            for (const MultiRank* mr : it->second) {
                results.push_back({mr->scenario_index, mr->rank_per_mode[m], mr->success});
            }
            ReportRow row;
            row.split_class = cls;
            row.mode = modes[m];
            row.top1 = topx_accuracy(results, 1);
            row.top3 = topx_accuracy(results, 3);
            row.n_events = results.size();
            std::tie(row.succ_hist, row.nsucc_hist) = rank_histogram(results);
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

std::string format_fraction(const std::optional<double>& value) {
    if (!value) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", *value);
    return buf;
}

void write_report_csv(std::ostream& out, const Report& report) {
    out << "split_class,mode,top1_succ,top1_nsucc,top3_succ,top3_nsucc,n_events\n";
    for (const auto& row : report.rows) {
        out << row.split_class << ',' << to_string(row.mode) << ',' << format_fraction(row.top1.succ) << ','
            << format_fraction(row.top1.nsucc) << ',' << format_fraction(row.top3.succ) << ','
            << format_fraction(row.top3.nsucc) << ',' << row.n_events << '\n';
    }
}

std::string render_histogram_svg(const RankHistogram& succ, const RankHistogram& nsucc,
                                 const std::string& title) {
    constexpr int kWidth = 480;
    constexpr int kHeight = 300;
    constexpr int kLeft = 50;
    constexpr int kBottom = 40;
    constexpr int kTop = 36;
    const int plot_w = kWidth - kLeft - 20;
    const int plot_h = kHeight - kBottom - kTop;
    std::size_t peak = 1;
    for (std::size_t i = 0; i < kHistogramBins; ++i) peak = std::max({peak, succ.bins[i], nsucc.bins[i]});

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"14\">" << title << "</text>\n";
    const double slot = static_cast<double>(plot_w) / kHistogramBins;
    const double bar = slot * 0.38;
    char buf[256];
    for (std::size_t i = 0; i < kHistogramBins; ++i) {
        const double x0 = kLeft + slot * static_cast<double>(i) + slot * 0.1;
        const std::pair<std::size_t, const char*> series[2] = {{succ.bins[i], "#1f77b4"},
                                                               {nsucc.bins[i], "#ff7f0e"}};
        for (int k = 0; k < 2; ++k) {
            const double h = plot_h * static_cast<double>(series[k].first) / static_cast<double>(peak);
            std::snprintf(buf, sizeof buf,
                          "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"%s\"/>\n",
                          x0 + k * bar, kTop + plot_h - h, bar, h, series[k].second);
            svg << buf;
        }
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.2f\" y=\"%d\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                      "font-size=\"11\">%zu</text>\n",
                      x0 + bar, kTop + plot_h + 16, i + 1);
        svg << buf;
    }
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w << "\" y2=\""
        << kTop + plot_h << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 4 << "\" text-anchor=\"end\" "
        << "font-family=\"sans-serif\" font-size=\"11\">" << peak << "</text>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 6
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">rank of actual receiver "
        << "(blue: successful " << succ.total() << ", orange: unsuccessful " << nsucc.total()
        << ")</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace passfeas
