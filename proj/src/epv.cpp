#include "passfeas/epv.hpp"

#include <algorithm>
#include <cmath>

#include "passfeas/error.hpp"

namespace passfeas {

namespace {

double segment_distance(Point2 p, Point2 a, Point2 b) {
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + t * ab);
}

int clamp_index(double v, int n) {
    if (!(v > 0.0)) return 0;
    if (v >= n - 1) return n - 1;
    return static_cast<int>(v);
}

}  // namespace

Point2 cell_center(int col, int row, int map_width, int map_height, const FieldSpec& field) {
    return {(col + 0.5) * field.length / map_width, (row + 0.5) * field.width / map_height};
}

ReceiverRegion receiver_region(Point2 passer, Point2 receiver, const ValueMap& map,
                               const FieldSpec& field, double q, double s) {
    if (passer == receiver) throw Error("degenerate direction: passer and receiver coincide");
    if (!(q > 0.0) || !(s > 0.0)) throw Error("disc radius and tube width must be positive");
    ReceiverRegion region;
    region.disc_center = receiver;
    region.disc_radius = q * field.length;
    region.tube_start = passer;
    region.tube_end = receiver;
    region.tube_width = s * field.length;
    region.map_width = map.width;
    region.map_height = map.height;

    const double half_tube = 0.5 * region.tube_width;
    const double reach = std::max(region.disc_radius, half_tube);
    const double min_x = std::min(passer.x, receiver.x) - reach;
    const double max_x = std::max(passer.x, receiver.x) + reach;
    const double min_y = std::min(passer.y, receiver.y) - reach;
    const double max_y = std::max(passer.y, receiver.y) + reach;
    const double cell_w = field.length / map.width;
    const double cell_h = field.width / map.height;
    // Candidate window (one cell of slack on each side), then exact center tests.
    const int c0 = clamp_index(min_x / cell_w - 1.0, map.width);
    const int c1 = clamp_index(max_x / cell_w + 1.0, map.width);
    const int r0 = clamp_index(min_y / cell_h - 1.0, map.height);
    const int r1 = clamp_index(max_y / cell_h + 1.0, map.height);
    if (max_x >= 0.0 && min_x <= field.length && max_y >= 0.0 && min_y <= field.width) {
        for (int row = r0; row <= r1; ++row) {
            for (int col = c0; col <= c1; ++col) {
                const Point2 c = cell_center(col, row, map.width, map.height, field);
                if (distance(c, receiver) <= region.disc_radius ||
                    segment_distance(c, passer, receiver) <= half_tube) {
                    region.cells.push_back(static_cast<std::size_t>(row) * map.width + col);
                }
            }
        }
    }
    if (region.cells.empty()) throw Error("region outside map");
    return region;
}

double map_value(const ReceiverRegion& region, const ValueMap& map) {
    if (region.map_width != map.width || region.map_height != map.height) {
        throw Error("value map dimensions do not match the resolved region");
    }
    if (region.cells.empty()) throw Error("region outside map");
    // Mean taken as an offset from the first cell, which keeps constant maps exact.
    const double ref = map.values[region.cells.front()];
    double lo = ref;
    double hi = ref;
    double offset = 0.0;
    for (std::size_t idx : region.cells) {
        const double v = map.values[idx];
        offset += v - ref;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double mean = ref + offset / static_cast<double>(region.cells.size());
    return std::clamp(mean, lo, hi);
}

std::string_view to_string(ValueKind kind) {
    return kind == ValueKind::PassProbability ? "VP" : "VE";
}

std::optional<ValueKind> parse_value_kind(std::string_view text) {
    if (text == "VP" || text == "V_P") return ValueKind::PassProbability;
    if (text == "VE" || text == "V_E") return ValueKind::Epv;
    return std::nullopt;
}

ValueEvaluation combine_with_orientation(const Scenario& scenario, const ValueMap& map,
                                         const ModelParams& params, ValueKind kind, double q, double s) {
    validate(scenario);
    ValueEvaluation out;
    out.kind = kind;
    std::vector<FeasibilityBreakdown> keys;
    std::vector<double> products;
    std::vector<double> values;
    for (const auto& r : scenario.receivers) {
        ValueEntry e;
        e.receiver_id = r.id;
        const ReceiverRegion region = receiver_region(scenario.passer.position, r.position, map,
                                                      scenario.field, q, s);
        e.value = map_value(region, map);
        e.cell_count = region.cells.size();
        e.F_o = orientation_feasibility(scenario.passer, r, params);
        e.product = e.value * e.F_o;

        FeasibilityBreakdown key;
        key.receiver_id = r.id;
        key.F_o = e.F_o;
        key.distance_to_passer = scenario.field.normalized_distance(scenario.passer.position, r.position);
        keys.push_back(std::move(key));
        products.push_back(e.product);
        values.push_back(e.value);
        out.entries.push_back(std::move(e));
    }
    out.ranking = rank_receivers(keys, products);
    out.value_ranking = rank_receivers(keys, values);
    return out;
}

}  // namespace passfeas
