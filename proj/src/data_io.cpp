#include "passfeas/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <sstream>

#include "passfeas/error.hpp"

namespace passfeas {

namespace {

constexpr const char* kFormatTag = "passfeas-scenarios";

void reject_unknown_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
            throw Error(where + ": unknown field '" + it.key() + "'");
        }
    }
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw Error(where + ": missing field '" + key + "'");
    return *it;
}

double as_number(const Json& v, const std::string& where) {
    if (!v.is_number()) throw Error(where + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw Error(where + ": value is not finite");
    return x;
}

double as_orientation(const Json& v, const std::string& where) {
    const double deg = as_number(v, where);
    if (!(deg >= 0.0 && deg < 360.0)) {
        std::ostringstream msg;
        msg << where << ": orientation " << deg << " outside [0, 360)";
        throw Error(msg.str());
    }
    return deg;
}

std::string as_string(const Json& v, const std::string& where) {
    if (!v.is_string()) throw Error(where + ": expected a string");
    return v.get<std::string>();
}

PlayerState parse_player(const Json& obj, const std::string& where, std::optional<long> kick_frame,
                         const LoadOptions& options) {
    if (!obj.is_object()) throw Error(where + ": expected an object");
    reject_unknown_keys(obj, {"id", "x_m", "y_m", "orientation_deg", "role", "orientation_samples"}, where);
    PlayerState p;
    p.id = as_string(require(obj, "id", where), where + ".id");
    if (p.id.empty()) throw Error(where + ".id: empty player id");
    p.position.x = as_number(require(obj, "x_m", where), where + ".x_m");
    p.position.y = as_number(require(obj, "y_m", where), where + ".y_m");
    if (auto it = obj.find("role"); it != obj.end() && !it->is_null()) {
        const std::string text = as_string(*it, where + ".role");
        p.role = parse_role(text);
        if (!p.role) throw Error(where + ".role: unknown role '" + text + "'");
    }
    if (auto it = obj.find("orientation_samples"); it != obj.end()) {
        const std::string w = where + ".orientation_samples";
        if (!it->is_array()) throw Error(w + ": expected an array of [frame, degrees]");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const Json& pair = (*it)[i];
            const std::string wi = w + "[" + std::to_string(i) + "]";
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer()) {
                throw Error(wi + ": expected [frame, degrees]");
            }
            OrientationSample s{pair[0].get<long>(), as_orientation(pair[1], wi)};
            if (!p.orientation_samples.empty() && s.frame <= p.orientation_samples.back().frame) {
                throw Error(wi + ": frames must be strictly increasing");
            }
            p.orientation_samples.push_back(s);
        }
    }
    if (auto it = obj.find("orientation_deg"); it != obj.end() && !it->is_null()) {
        p.orientation = as_orientation(*it, where + ".orientation_deg");
    } else if (!p.orientation_samples.empty()) {
        if (!kick_frame) throw Error(where + ": orientation_samples given without kick_frame");
        try {
            p.orientation = smooth_orientation({p.id, p.orientation_samples}, *kick_frame,
                                               options.smoothing_window);
        } catch (const Error& e) {
            throw Error(where + ": " + e.what());
        }
    }
    return p;
}

Json player_to_json(const PlayerState& p) {
    Json j;
    j["id"] = p.id;
    j["x_m"] = p.position.x;
    j["y_m"] = p.position.y;
    if (p.orientation) j["orientation_deg"] = *p.orientation;
    if (p.role) j["role"] = std::string(to_string(*p.role));
    if (!p.orientation_samples.empty()) {
        Json arr = Json::array();
        for (const auto& s : p.orientation_samples) arr.push_back(Json::array({s.frame, s.orientation}));
        j["orientation_samples"] = std::move(arr);
    }
    return j;
}

}  // namespace

double circular_median(std::vector<double> angles) {
    if (angles.empty()) throw Error("no orientation samples");
    double sx = 0.0;
    double sy = 0.0;
    for (double a : angles) {
        sx += std::cos(deg_to_rad(a));
        sy += std::sin(deg_to_rad(a));
    }
    const double mean = wrap_degrees(rad_to_deg(std::atan2(sy, sx)));
    // Order by signed offset from the mean but hand back the original sample.
    std::vector<std::pair<double, double>> unwrapped;
    unwrapped.reserve(angles.size());
    for (double a : angles) unwrapped.emplace_back(wrap_signed_degrees(a - mean), a);
    std::sort(unwrapped.begin(), unwrapped.end());
    const std::size_t n = unwrapped.size();
    auto pick = unwrapped[n / 2];
    if (n % 2 == 0) {
        const auto lo = unwrapped[n / 2 - 1];
        pick = std::abs(lo.first) <= std::abs(pick.first) ? lo : pick;
    }
    return wrap_degrees(pick.second);
}

double smooth_orientation(const OrientationSeries& series, long t, int q) {
    if (q < 0) throw Error("smoothing window must be non-negative");
    std::vector<double> window;
    for (const auto& s : series.samples) {
        if (s.frame >= t - q && s.frame <= t + q) window.push_back(s.orientation);
    }
    if (window.empty()) {
        throw Error("no orientation samples for player '" + series.player_id + "' near frame " +
                    std::to_string(t));
    }
    return circular_median(std::move(window));
}

FieldSpec parse_field(const Json& obj, const std::string& where) {
    if (!obj.is_object()) throw Error(where + ": expected an object");
    reject_unknown_keys(obj, {"length_m", "width_m", "attack_direction"}, where);
    const double length = as_number(require(obj, "length_m", where), where + ".length_m");
    const double width = as_number(require(obj, "width_m", where), where + ".width_m");
    AttackDirection dir = AttackDirection::PositiveX;
    if (auto it = obj.find("attack_direction"); it != obj.end()) {
        const std::string text = as_string(*it, where + ".attack_direction");
        if (text == "-x") {
            dir = AttackDirection::NegativeX;
        } else if (text != "+x") {
            throw Error(where + ".attack_direction: expected \"+x\" or \"-x\"");
        }
    }
    try {
        return make_field(length, width, dir);
    } catch (const Error& e) {
        throw Error(where + ": " + e.what());
    }
}

Json field_to_json(const FieldSpec& field) {
    Json j;
    j["length_m"] = field.length;
    j["width_m"] = field.width;
    j["attack_direction"] = field.attack_direction == AttackDirection::PositiveX ? "+x" : "-x";
    return j;
}

bool parse_scenario_record(const Json& record, const FieldSpec& field, const LoadOptions& options,
                           const std::string& where, Scenario& out,
                           std::vector<std::string>& warnings) {
    if (!record.is_object()) throw Error(where + ": expected an object");
    reject_unknown_keys(record, {"event", "kick_frame", "passer", "receivers", "defenders",
                                 "ground_truth", "success"},
                        where);
    Scenario s;
    s.field = field;
    if (auto it = record.find("event"); it != record.end()) s.event_id = as_string(*it, where + ".event");
    if (auto it = record.find("kick_frame"); it != record.end() && !it->is_null()) {
        if (!it->is_number_integer()) throw Error(where + ".kick_frame: expected an integer");
        s.kick_frame = it->get<long>();
    }
    s.passer = parse_player(require(record, "passer", where), where + ".passer", s.kick_frame, options);

    auto parse_group = [&](const char* key, bool required) {
        std::vector<PlayerState> players;
        auto it = record.find(key);
        if (it == record.end()) {
            if (required) throw Error(where + ": missing field '" + key + "'");
            return players;
        }
        if (!it->is_array()) throw Error(where + "." + key + ": expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            players.push_back(parse_player((*it)[i], where + "." + key + "[" + std::to_string(i) + "]",
                                           s.kick_frame, options));
        }
        return players;
    };
    std::vector<PlayerState> receivers = parse_group("receivers", true);
    s.defenders = parse_group("defenders", false);

    if (auto it = record.find("ground_truth"); it != record.end() && !it->is_null()) {
        s.ground_truth_receiver = as_string(*it, where + ".ground_truth");
    }
    if (auto it = record.find("success"); it != record.end() && !it->is_null()) {
        if (!it->is_boolean()) throw Error(where + ".success: expected a boolean");
        s.success = it->get<bool>();
    }

    bool keep = true;
    for (auto& r : receivers) {
        if (r.role == Role::Goalkeeper) {
            warnings.push_back(where + ": dropped goalkeeper receiver '" + r.id + "'");
            if (s.ground_truth_receiver == r.id) keep = false;
            continue;
        }
        s.receivers.push_back(std::move(r));
    }
    if (!keep) {
        warnings.push_back(where + ": dropped event whose ground truth receiver is a goalkeeper");
        return false;
    }
    try {
        validate(s);
    } catch (const Error& e) {
        throw Error(where + ": " + e.what());
    }
    out = std::move(s);
    return true;
}

Json scenario_to_record(const Scenario& s) {
    Json j;
    if (!s.event_id.empty()) j["event"] = s.event_id;
    if (s.kick_frame) j["kick_frame"] = *s.kick_frame;
    j["passer"] = player_to_json(s.passer);
    Json receivers = Json::array();
    for (const auto& r : s.receivers) receivers.push_back(player_to_json(r));
    j["receivers"] = std::move(receivers);
    Json defenders = Json::array();
    for (const auto& d : s.defenders) defenders.push_back(player_to_json(d));
    j["defenders"] = std::move(defenders);
    if (s.ground_truth_receiver) j["ground_truth"] = *s.ground_truth_receiver;
    if (s.success) j["success"] = *s.success;
    return j;
}

LoadedScenarios read_scenarios(std::istream& in, const LoadOptions& options) {
    LoadedScenarios loaded;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t record_index = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where_line = "line " + std::to_string(line_no);
        Json j;
        try {
            j = Json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(where_line + ": malformed JSON (" + e.what() + ")");
        }
        if (!have_header) {
            if (!j.is_object()) throw Error(where_line + ": expected header object");
            reject_unknown_keys(j, {"format", "version", "field"}, where_line);
            if (as_string(require(j, "format", where_line), where_line + ".format") != kFormatTag) {
                throw Error(where_line + ": not a passfeas scenario file");
            }
            const Json& version = require(j, "version", where_line);
            if (!version.is_number_integer() || version.get<int>() != kScenarioFormatVersion) {
                throw Error(where_line + ": unsupported version");
            }
            loaded.field = parse_field(require(j, "field", where_line), where_line + ".field");
            have_header = true;
            continue;
        }
        const std::string where = where_line + " (record " + std::to_string(record_index) + ")";
        ++record_index;
        Scenario s;
        const std::size_t before = loaded.warnings.size();
        const bool keep = parse_scenario_record(j, loaded.field, options, where, s, loaded.warnings);
        for (std::size_t i = before; i < loaded.warnings.size(); ++i) {
            if (loaded.warnings[i].find("dropped goalkeeper") != std::string::npos) ++loaded.dropped_goalkeepers;
        }
        if (keep) loaded.scenarios.push_back(std::move(s));
    }
    if (!have_header) throw Error("missing scenario file header");
    return loaded;
}

LoadedScenarios load_scenarios(const std::filesystem::path& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scenario file '" + path.string() + "'");
    try {
        return read_scenarios(in, options);
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

void write_scenarios(std::ostream& out, const FieldSpec& field, const std::vector<Scenario>& scenarios) {
    Json header;
    header["format"] = kFormatTag;
    header["version"] = kScenarioFormatVersion;
    header["field"] = field_to_json(field);
    out << header.dump() << '\n';
    for (const auto& s : scenarios) {
        if (!(s.field == field)) throw Error("scenario '" + s.event_id + "' uses a different field");
        out << scenario_to_record(s).dump() << '\n';
    }
}

void save_scenarios(const std::filesystem::path& path, const FieldSpec& field,
                    const std::vector<Scenario>& scenarios) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write scenario file '" + path.string() + "'");
    write_scenarios(out, field, scenarios);
}

ValueMap make_value_map(int width, int height, std::vector<double> values) {
    if (width <= 0 || height <= 0) throw Error("value map dimensions must be positive");
    if (values.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw Error("value map holds " + std::to_string(values.size()) + " values, expected " +
                    std::to_string(static_cast<std::size_t>(width) * height));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw Error("value map entry " + std::to_string(i) + " is not finite");
    }
    return ValueMap{width, height, std::move(values)};
}

ValueMap read_value_map(std::istream& in) {
    long width = 0;
    long height = 0;
    if (!(in >> width >> height)) throw Error("value map header must be \"width height\"");
    if (width <= 0 || height <= 0 || width > 100000 || height > 100000) {
        throw Error("value map dimensions must be positive");
    }
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(width * height));
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size()) {
            throw Error("value map entry " + std::to_string(values.size()) + " is not a number: '" + token + "'");
        }
        values.push_back(v);
    }
    return make_value_map(static_cast<int>(width), static_cast<int>(height), std::move(values));
}

ValueMap load_value_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open value map '" + path.string() + "'");
    try {
        return read_value_map(in);
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

void write_value_map(std::ostream& out, const ValueMap& map) {
    out << map.width << ' ' << map.height << '\n';
    char buf[32];
    for (int row = 0; row < map.height; ++row) {
        for (int col = 0; col < map.width; ++col) {
            std::snprintf(buf, sizeof buf, "%.17g", map.at(col, row));
            out << (col ? " " : "") << buf;
        }
        out << '\n';
    }
}

void save_value_map(const std::filesystem::path& path, const ValueMap& map) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write value map '" + path.string() + "'");
    write_value_map(out, map);
}

}  // namespace passfeas
