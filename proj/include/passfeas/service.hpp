#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "passfeas/data_io.hpp"
#include "passfeas/epv.hpp"
#include "passfeas/feasibility.hpp"

namespace httplib {
class Server;
}

namespace passfeas {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path map_dir;  // *.map files, addressed by stem
    std::filesystem::path ui_dir;   // optional static files served at /
    double psi = 30.0;
    int neighbors = 3;
    int smoothing_window = kDefaultSmoothingWindow;
};

struct ServiceReply {
    int status = 200;
    std::string body;  // JSON
};

/// Stateless request handlers. Everything is fixed at construction, so one
/// instance may serve concurrent requests.
class Service {
public:
    explicit Service(const ServiceConfig& config);
    Service(ModelParams params, LoadOptions options, std::map<std::string, ValueMap> maps);

    ServiceReply evaluate(const std::string& body) const;       // POST /api/evaluate
    ServiceReply epv_combine(const std::string& body) const;    // POST /api/epv-combine
    ServiceReply list_maps() const;                             // GET /api/maps
    ServiceReply health() const;                                // GET /health

    const ModelParams& params() const { return params_; }

private:
    ModelParams params_;
    LoadOptions options_;
    std::map<std::string, ValueMap> maps_;
};

std::map<std::string, ValueMap> load_map_directory(const std::filesystem::path& dir);

void bind_routes(httplib::Server& server, const Service& service);

/// Blocks until the server stops. Returns false if the socket could not be bound.
bool run_service(const ServiceConfig& config);

}  // namespace passfeas
