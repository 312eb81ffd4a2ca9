#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "passfeas/feasibility.hpp"

namespace passfeas {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Orientation streams

struct OrientationSeries {
    std::string player_id;
    std::vector<OrientationSample> samples;  // strictly increasing frames
};

inline constexpr int kDefaultSmoothingWindow = 2;  // +/- frames, 5 observations

/// Circular median of the samples within [t - q, t + q]. Samples are unwrapped
/// around their circular mean and the middle one is taken; with an even count
/// the one nearer the mean wins (earlier in sorted order on exact ties).
double smooth_orientation(const OrientationSeries& series, long t, int q = kDefaultSmoothingWindow);
double circular_median(std::vector<double> angles_deg);

// ---------------------------------------------------------------------------
// Scenario files (JSON Lines: header line, then one record per pass event)

inline constexpr int kScenarioFormatVersion = 1;

struct LoadOptions {
    int smoothing_window = kDefaultSmoothingWindow;
};

struct LoadedScenarios {
    FieldSpec field;
    std::vector<Scenario> scenarios;
    std::vector<std::string> warnings;
    std::size_t dropped_goalkeepers = 0;
};

/// Parses one event record. `where` prefixes every error message. Goalkeeper
/// receivers are removed and reported through `warnings`; returns false when
/// the whole event had to be dropped (pass to a goalkeeper).
bool parse_scenario_record(const Json& record, const FieldSpec& field,
                           const LoadOptions& options, const std::string& where,
                           Scenario& out, std::vector<std::string>& warnings);
Json scenario_to_record(const Scenario& scenario);

FieldSpec parse_field(const Json& field, const std::string& where);
Json field_to_json(const FieldSpec& field);

LoadedScenarios read_scenarios(std::istream& in, const LoadOptions& options = {});
LoadedScenarios load_scenarios(const std::filesystem::path& path, const LoadOptions& options = {});

/// All scenarios must share `field`.
void write_scenarios(std::ostream& out, const FieldSpec& field, const std::vector<Scenario>& scenarios);
void save_scenarios(const std::filesystem::path& path, const FieldSpec& field,
                    const std::vector<Scenario>& scenarios);

// ---------------------------------------------------------------------------
// Value maps: "width height" header then row-major scalars. Row 0 is the
// strip nearest y = 0, column 0 the strip nearest x = 0.

inline constexpr int kValueMapWidth = 104;
inline constexpr int kValueMapHeight = 68;

struct ValueMap {
    int width = kValueMapWidth;
    int height = kValueMapHeight;
    std::vector<double> values;

    double at(int col, int row) const { return values[static_cast<std::size_t>(row) * width + col]; }
    std::size_t size() const { return values.size(); }
};

ValueMap make_value_map(int width, int height, std::vector<double> values);
ValueMap read_value_map(std::istream& in);
ValueMap load_value_map(const std::filesystem::path& path);
void write_value_map(std::ostream& out, const ValueMap& map);
void save_value_map(const std::filesystem::path& path, const ValueMap& map);

// ---------------------------------------------------------------------------
// Synthetic corpora

struct SynthConfig {
    std::uint64_t seed = 1;
    int n_events = 100;
    double pressure = 0.5;           // 0 = loose marking, 1 = tight
    double orientation_noise = 15.0;  // degrees, std
    bool planted_best = true;
    double temperature = 0.05;  // softmax temperature over F when not planted
    FieldSpec field{};
};

std::vector<Scenario> generate_synthetic(const SynthConfig& config,
                                         const ModelParams& params = ModelParams{});

}  // namespace passfeas
