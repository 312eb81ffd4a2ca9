#pragma once

#include <string_view>
#include <vector>

#include "passfeas/data_io.hpp"
#include "passfeas/feasibility.hpp"

namespace passfeas {

/// Disc radius and tube width, in units where the field length is 1.
inline constexpr double kDefaultDiscRadius = 5.0 / kValueMapWidth;
inline constexpr double kDefaultTubeWidth = 2.0 / kValueMapWidth;

/// Disc around the receiver united with a tube along the pass, resolved
/// to the map cells whose centers fall inside.
struct ReceiverRegion {
    Point2 disc_center;
    double disc_radius = 0.0;  // meters
    Point2 tube_start;
    Point2 tube_end;
    double tube_width = 0.0;  // meters
    int map_width = 0;
    int map_height = 0;
    std::vector<std::size_t> cells;  // ascending row-major indices
};

/// Center of a map cell in field meters.
Point2 cell_center(int col, int row, int map_width, int map_height, const FieldSpec& field);

ReceiverRegion receiver_region(Point2 passer, Point2 receiver, const ValueMap& map,
                               const FieldSpec& field, double q = kDefaultDiscRadius,
                               double s = kDefaultTubeWidth);

/// Mean of the map over the region cells.
double map_value(const ReceiverRegion& region, const ValueMap& map);

enum class ValueKind { PassProbability, Epv };

std::string_view to_string(ValueKind kind);  // "VP" / "VE"
std::optional<ValueKind> parse_value_kind(std::string_view text);

struct ValueEntry {
    std::string receiver_id;
    double value = 0.0;
    double F_o = 0.0;
    double product = 0.0;
    std::size_t cell_count = 0;
};

struct ValueEvaluation {
    ValueKind kind = ValueKind::PassProbability;
    std::vector<ValueEntry> entries;        // receiver order
    std::vector<std::size_t> ranking;       // by value * F_o
    std::vector<std::size_t> value_ranking;  // by value alone
};

ValueEvaluation combine_with_orientation(const Scenario& scenario, const ValueMap& map,
                                         const ModelParams& params, ValueKind kind,
                                         double q = kDefaultDiscRadius, double s = kDefaultTubeWidth);

}  // namespace passfeas
