#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "passfeas/feasibility.hpp"

namespace passfeas {

struct RankResult {
    std::size_t scenario_index = 0;
    std::size_t rank = 1;  // 1 = best
    bool success = true;
};

/// Fractions per outcome class; a class with no events is absent, not zero.
struct TopX {
    std::optional<double> succ;
    std::optional<double> nsucc;
};

TopX topx_accuracy(const std::vector<RankResult>& results, std::size_t x);

inline constexpr std::size_t kHistogramBins = 9;

struct RankHistogram {
    bool successful = true;
    std::array<std::size_t, kHistogramBins> bins{};  // bins[n-1] counts rank n
    std::size_t overflow = 0;                       // ranks beyond the last bin

    std::size_t total() const;
};

/// First: successful passes, second: unsuccessful.
std::pair<RankHistogram, RankHistogram> rank_histogram(const std::vector<RankResult>& results);

enum class Phase { BuildUp, Progression, Finalization };

std::string_view to_string(Phase phase);

/// Clusters defender depths (goalkeeper excluded) into three rows with a
/// deterministic 1-D k-means, then places the passer relative to the rows.
Phase classify_phase(const Scenario& scenario);

/// Row centers, ascending along the attack axis; exposed for diagnostics.
std::array<double, 3> defensive_rows(const Scenario& scenario);

/// Scenarios without ground truth are skipped; a missing success flag counts
/// as successful.
std::vector<RankResult> rank_results(const std::vector<Scenario>& scenarios,
                                     const ModelParams& params, ScoreMode mode);

enum class SplitKind { None, Position, Phase };

std::string_view to_string(SplitKind split);
std::optional<SplitKind> parse_split(std::string_view text);

struct ReportRow {
    std::string split_class;
    ScoreMode mode = ScoreMode::F;
    TopX top1;
    TopX top3;
    std::size_t n_events = 0;
    RankHistogram succ_hist;
    RankHistogram nsucc_hist;
};

struct Report {
    SplitKind split = SplitKind::None;
    std::vector<ReportRow> rows;  // class-major, then mode in request order
    std::vector<std::string> warnings;
};

Report split_report(const std::vector<Scenario>& scenarios, const ModelParams& params,
                    const std::vector<ScoreMode>& modes, SplitKind split);

/// Columns: split_class,mode,top1_succ,top1_nsucc,top3_succ,top3_nsucc,n_events.
/// Absent classes leave the cell empty.
void write_report_csv(std::ostream& out, const Report& report);
std::string format_fraction(const std::optional<double>& value);

/// Grouped bar chart of both outcome histograms.
std::string render_histogram_svg(const RankHistogram& succ, const RankHistogram& nsucc,
                                 const std::string& title);

}  // namespace passfeas
