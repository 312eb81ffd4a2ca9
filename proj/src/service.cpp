#include "passfeas/service.hpp"

#include <iostream>

#include "httplib.h"
#include "passfeas/error.hpp"

namespace passfeas {

namespace {

struct HttpError {
    int status;
    std::string message;
};

ServiceReply json_reply(int status, const Json& body) { return {status, body.dump()}; }

ServiceReply error_reply(int status, const std::string& message) {
    Json j;
    j["error"] = message;
    return json_reply(status, j);
}

Json points_json(const std::vector<Point2>& pts) {
    Json arr = Json::array();
    for (const auto& p : pts) arr.push_back(Json::array({p.x, p.y}));
    return arr;
}

struct ParsedRequest {
    Scenario scenario;
    std::vector<std::string> warnings;
    Json request;
};

ParsedRequest parse_request(const std::string& body, const LoadOptions& options,
                            std::initializer_list<std::string_view> extra_keys) {
    ParsedRequest out;
    try {
        out.request = Json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw HttpError{400, std::string("malformed JSON: ") + e.what()};
    }
    const Json& req = out.request;
    if (!req.is_object()) throw HttpError{400, "request: expected an object"};
    for (auto it = req.begin(); it != req.end(); ++it) {
        const bool known = it.key() == "scenario" || it.key() == "field" ||
                           std::find(extra_keys.begin(), extra_keys.end(), it.key()) != extra_keys.end();
        if (!known) throw HttpError{400, "request: unknown field '" + it.key() + "'"};
    }
    try {
        FieldSpec field;
        if (auto f = req.find("field"); f != req.end()) field = parse_field(*f, "field");
        auto rec = req.find("scenario");
        if (rec == req.end()) throw Error("request: missing field 'scenario'");
        if (!parse_scenario_record(*rec, field, options, "scenario", out.scenario, out.warnings)) {
            throw Error("scenario: ground truth receiver is a goalkeeper");
        }
    } catch (const Error& e) {
        throw HttpError{400, e.what()};
    }
    if (!out.scenario.passer.role) out.warnings.push_back("scenario.passer: role missing");
    for (const auto& r : out.scenario.receivers) {
        if (!r.role) out.warnings.push_back("scenario.receivers: role missing for '" + r.id + "'");
    }
    return out;
}

std::string optional_string(const Json& req, const char* key, const std::string& fallback) {
    auto it = req.find(key);
    if (it == req.end() || it->is_null()) return fallback;
    if (!it->is_string()) throw HttpError{400, std::string(key) + ": expected a string"};
    return it->get<std::string>();
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

std::map<std::string, ValueMap> load_map_directory(const std::filesystem::path& dir) {
    std::map<std::string, ValueMap> maps;
    if (dir.empty()) return maps;
    if (!std::filesystem::is_directory(dir)) throw Error("map directory '" + dir.string() + "' not found");
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".map") {
            maps.emplace(entry.path().stem().string(), load_value_map(entry.path()));
        }
    }
    return maps;
}

Service::Service(const ServiceConfig& config)
    : Service(ModelParams(config.psi, 1.0, config.neighbors), LoadOptions{config.smoothing_window},
              load_map_directory(config.map_dir)) {}

Service::Service(ModelParams params, LoadOptions options, std::map<std::string, ValueMap> maps)
    : params_(params), options_(options), maps_(std::move(maps)) {}

ServiceReply Service::evaluate(const std::string& body) const {
    try {
        ParsedRequest parsed = parse_request(body, options_, {"mode", "map", "kind"});
        const std::string mode_text = optional_string(parsed.request, "mode", "F");
        const auto mode = parse_score_mode(mode_text);
        if (!mode) throw HttpError{400, "mode: unknown mode '" + mode_text + "'"};
        const std::string map_name = optional_string(parsed.request, "map", "");
        const ValueMap* map = nullptr;
        if (!map_name.empty()) {
            auto it = maps_.find(map_name);
            if (it == maps_.end()) throw HttpError{404, "unknown value map '" + map_name + "'"};
            map = &it->second;
        }

        const Scenario& s = parsed.scenario;
        ScenarioEvaluation eval;
        try {
            eval = evaluate_scenario(s, params_, *mode);
        } catch (const Error& e) {
            throw HttpError{400, e.what()};
        }

        Json out;
        out["event"] = s.event_id;
        out["mode"] = std::string(to_string(*mode));
        out["predicted"] = eval.predicted().receiver_id;
        Json ranking = Json::array();
        for (std::size_t idx : eval.ranking) ranking.push_back(eval.breakdowns[idx].receiver_id);
        out["ranking"] = std::move(ranking);

        Json receivers = Json::array();
        for (std::size_t i = 0; i < eval.breakdowns.size(); ++i) {
            const auto& b = eval.breakdowns[i];
            Json r;
            r["id"] = b.receiver_id;
            r["rank"] = eval.rank_of(b.receiver_id);
            r["score"] = b.score(*mode);
            r["F_o"] = optional_number(b.F_o);
            r["F_dP"] = b.F_dP;
            r["F_dR"] = b.F_dR;
            r["F_d"] = b.F_d;
            r["F_p"] = b.F_p;
            r["F"] = optional_number(b.F);
            r["F_pd"] = b.F_pd;
            r["passer_neighbors"] = b.passer_neighbors;
            r["receiver_neighbors"] = b.receiver_neighbors;
            if (b.F_o) {
                const OrientationGeometry& g = eval.geometry[i];
                Json geo;
                geo["projected_receiver"] = Json::array({g.projected_receiver.x, g.projected_receiver.y});
                geo["receiver_triangle"] = points_json(g.receiver_triangle.vertices);
                geo["intersection"] = points_json(g.intersection.vertices);
                geo["weighted_area"] = g.weighted_area;
                r["geometry"] = std::move(geo);
            }
            receivers.push_back(std::move(r));
        }
        out["receivers"] = std::move(receivers);

        Json frame;
        frame["frame"] = "passer_local";
        frame["origin"] = Json::array({s.passer.position.x, s.passer.position.y});
        frame["z"] = params_.z();
        for (const auto& g : eval.geometry) {
            if (!g.passer_triangle.empty()) {
                frame["passer_triangle"] = points_json(g.passer_triangle.vertices);
                break;
            }
        }
        out["geometry"] = std::move(frame);

        if (map) {
            const std::string kind_text = optional_string(parsed.request, "kind", "VP");
            const auto kind = parse_value_kind(kind_text);
            if (!kind) throw HttpError{400, "kind: expected VP or VE"};
            ValueEvaluation ve;
            try {
                ve = combine_with_orientation(s, *map, params_, *kind);
            } catch (const Error& e) {
                throw HttpError{400, e.what()};
            }
            Json vj;
            vj["map"] = map_name;
            vj["kind"] = std::string(to_string(*kind));
            Json vr = Json::array();
            for (std::size_t idx : ve.ranking) vr.push_back(ve.entries[idx].receiver_id);
            vj["ranking"] = std::move(vr);
            Json entries = Json::array();
            for (const auto& e : ve.entries) {
                entries.push_back({{"id", e.receiver_id}, {"V", e.value}, {"F_o", e.F_o},
                                   {"product", e.product}, {"cells", e.cell_count}});
            }
            vj["receivers"] = std::move(entries);
            out["value_map"] = std::move(vj);
        }
        out["warnings"] = parsed.warnings;
        return json_reply(200, out);
    } catch (const HttpError& e) {
        return error_reply(e.status, e.message);
    }
}

ServiceReply Service::epv_combine(const std::string& body) const {
    try {
        ParsedRequest parsed = parse_request(body, options_, {"map", "kind"});
        const std::string map_name = optional_string(parsed.request, "map", "");
        if (map_name.empty()) throw HttpError{400, "map: missing value map name"};
        auto it = maps_.find(map_name);
        if (it == maps_.end()) throw HttpError{404, "unknown value map '" + map_name + "'"};
        const std::string kind_text = optional_string(parsed.request, "kind", "VP");
        const auto kind = parse_value_kind(kind_text);
        if (!kind) throw HttpError{400, "kind: expected VP or VE"};

        ValueEvaluation ve;
        try {
            ve = combine_with_orientation(parsed.scenario, it->second, params_, *kind);
        } catch (const Error& e) {
            throw HttpError{400, e.what()};
        }
        Json out;
        out["event"] = parsed.scenario.event_id;
        out["map"] = map_name;
        out["kind"] = std::string(to_string(*kind));
        Json ranking = Json::array();
        for (std::size_t idx : ve.ranking) ranking.push_back(ve.entries[idx].receiver_id);
        out["ranking"] = std::move(ranking);
        Json value_ranking = Json::array();
        for (std::size_t idx : ve.value_ranking) value_ranking.push_back(ve.entries[idx].receiver_id);
        out["value_ranking"] = std::move(value_ranking);
        Json entries = Json::array();
        for (const auto& e : ve.entries) {
            entries.push_back({{"id", e.receiver_id}, {"V", e.value}, {"F_o", e.F_o},
                               {"product", e.product}, {"cells", e.cell_count}});
        }
        out["receivers"] = std::move(entries);
        out["warnings"] = parsed.warnings;
        return json_reply(200, out);
    } catch (const HttpError& e) {
        return error_reply(e.status, e.message);
    }
}

ServiceReply Service::list_maps() const {
    Json names = Json::array();
    for (const auto& [name, map] : maps_) {
        names.push_back({{"name", name}, {"width", map.width}, {"height", map.height}});
    }
    Json out;
    out["maps"] = std::move(names);
    return json_reply(200, out);
}

ServiceReply Service::health() const {
    Json out;
    out["status"] = "ok";
    out["psi"] = params_.psi();
    out["J"] = params_.neighbors();
    out["Q"] = options_.smoothing_window;
    return json_reply(200, out);
}

void bind_routes(httplib::Server& server, const Service& service) {
    auto send = [](httplib::Response& res, const ServiceReply& reply) {
        res.status = reply.status;
        res.set_content(reply.body, "application/json");
    };
    server.Post("/api/evaluate", [&service, send](const httplib::Request& req, httplib::Response& res) {
        send(res, service.evaluate(req.body));
    });
    server.Post("/api/epv-combine", [&service, send](const httplib::Request& req, httplib::Response& res) {
        send(res, service.epv_combine(req.body));
    });
    server.Get("/api/maps", [&service, send](const httplib::Request&, httplib::Response& res) {
        send(res, service.list_maps());
    });
    server.Get("/health", [&service, send](const httplib::Request&, httplib::Response& res) {
        send(res, service.health());
    });
}

bool run_service(const ServiceConfig& config) {
    const Service service(config);
    httplib::Server server;
    bind_routes(server, service);
    if (!config.ui_dir.empty() && !server.set_mount_point("/", config.ui_dir.string())) {
        throw Error("UI directory '" + config.ui_dir.string() + "' not found");
    }
    std::cerr << "passfeas: listening on " << config.host << ':' << config.port << '\n';
    return server.listen(config.host, config.port);
}

}  // namespace passfeas
