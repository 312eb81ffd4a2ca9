#include "passfeas/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "passfeas/data_io.hpp"
#include "passfeas/epv.hpp"
#include "passfeas/error.hpp"
#include "passfeas/evaluation.hpp"
#include "passfeas/feasibility.hpp"
#include "passfeas/service.hpp"

namespace passfeas {

namespace {

namespace fs = std::filesystem;

struct ModelOptions {
    double psi = 30.0;
    int neighbors = 3;
    int smoothing_window = kDefaultSmoothingWindow;

    ModelParams params() const { return ModelParams(psi, 1.0, neighbors); }
    LoadOptions load() const { return LoadOptions{smoothing_window}; }
};

void add_model_options(CLI::App& cmd, ModelOptions& opts, bool with_q) {
    cmd.add_option("--psi", opts.psi, "View-triangle half angle, degrees")->capture_default_str();
    cmd.add_option("--J", opts.neighbors, "Defenders considered per side")->capture_default_str();
    if (with_q) {
        cmd.add_option("--Q", opts.smoothing_window, "Orientation window, +/- frames")->capture_default_str();
    }
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

// Writes to a file, or to `out` when the path is "-".
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (path == "-") {
            stream_ = &fallback;
            return;
        }
        const fs::path p(path);
        if (p.has_parent_path() && !fs::is_directory(p.parent_path())) {
            throw Error("output directory '" + p.parent_path().string() + "' does not exist");
        }
        file_.open(p, std::ios::binary);
        if (!file_) throw Error("cannot write '" + path + "'");
        stream_ = &file_;
    }
    std::ostream& stream() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

LoadedScenarios load_input(const std::string& path, const ModelOptions& opts, std::ostream& err) {
    if (!fs::is_regular_file(path)) throw Error("input file '" + path + "' not found");
    LoadedScenarios loaded = load_scenarios(path, opts.load());
    if (loaded.dropped_goalkeepers) {
        err << "passfeas: warning: dropped " << loaded.dropped_goalkeepers << " goalkeeper receiver(s)\n";
    }
    return loaded;
}

std::vector<ScoreMode> parse_modes(const std::vector<std::string>& names) {
    std::vector<ScoreMode> modes;
    for (const auto& n : names) {
        const auto m = parse_score_mode(n);
        if (!m) throw Error("unknown mode '" + n + "'");
        modes.push_back(*m);
    }
    return modes;
}

int cmd_evaluate(const std::string& input, const std::string& output, const std::string& mode_name,
                 const ModelOptions& opts, std::ostream& out, std::ostream& err) {
    const auto mode = parse_score_mode(mode_name);
    if (!mode) throw Error("unknown mode '" + mode_name + "'");
    const ModelParams params = opts.params();
    const LoadedScenarios loaded = load_input(input, opts, err);
    Sink sink(output, out);
    std::ostream& csv = sink.stream();
    csv << "event_index,event,receiver,rank,score,F_o,F_dP,F_dR,F_d,F_p,F,F_pd,ground_truth\n";
    for (std::size_t i = 0; i < loaded.scenarios.size(); ++i) {
        const Scenario& s = loaded.scenarios[i];
        ScenarioEvaluation eval;
        try {
            eval = evaluate_scenario(s, params, *mode);
        } catch (const Error& e) {
            throw Error("event " + std::to_string(i) + ": " + e.what());
        }
        for (const auto& b : eval.breakdowns) {
            csv << i << ',' << s.event_id << ',' << b.receiver_id << ',' << eval.rank_of(b.receiver_id) << ','
                << num(b.score(*mode)) << ',' << num(b.F_o) << ',' << num(b.F_dP) << ',' << num(b.F_dR) << ','
                << num(b.F_d) << ',' << num(b.F_p) << ',' << num(b.F) << ',' << num(b.F_pd) << ','
                << (s.ground_truth_receiver == b.receiver_id ? 1 : 0) << '\n';
        }
    }
    return 0;
}

int cmd_report(const std::string& input, const std::string& output_dir, const std::vector<std::string>& mode_names,
               const std::string& split_name, const ModelOptions& opts, std::ostream& out, std::ostream& err) {
    const auto split = parse_split(split_name);
    if (!split) throw Error("unknown split '" + split_name + "'");
    const std::vector<ScoreMode> modes = parse_modes(mode_names);
    if (!fs::is_directory(output_dir)) throw Error("output directory '" + output_dir + "' does not exist");
    const ModelParams params = opts.params();
    const LoadedScenarios loaded = load_input(input, opts, err);
    if (loaded.scenarios.empty()) throw Error("no events");

    const Report report = split_report(loaded.scenarios, params, modes, *split);
    for (const auto& w : report.warnings) err << "passfeas: warning: " << w << '\n';
    if (report.rows.empty()) throw Error("no events with ground truth");
    {
        Sink sink((fs::path(output_dir) / "report.csv").string(), out);
        write_report_csv(sink.stream(), report);
    }
    for (const auto& row : report.rows) {
        const std::string name = "hist_" + row.split_class + "_" + std::string(to_string(row.mode)) + ".svg";
        Sink sink((fs::path(output_dir) / name).string(), out);
        sink.stream() << render_histogram_svg(row.succ_hist, row.nsucc_hist,
                                              std::string(to_string(row.mode)) + " / " + row.split_class);
    }
    write_report_csv(out, report);
    return 0;
}

int cmd_synth(const SynthConfig& config, const std::string& output, const ModelOptions& opts, std::ostream& out) {
    const std::vector<Scenario> scenarios = generate_synthetic(config, opts.params());
    Sink sink(output, out);
    write_scenarios(sink.stream(), config.field, scenarios);
    return 0;
}

int cmd_epv(const std::string& input, const std::string& map_path, const std::string& kind_name,
            const std::string& output, const ModelOptions& opts, std::ostream& out, std::ostream& err) {
    const auto kind = parse_value_kind(kind_name);
    if (!kind) throw Error("unknown value kind '" + kind_name + "' (expected VP or VE)");
    if (!fs::is_regular_file(map_path)) throw Error("value map '" + map_path + "' not found");
    const ModelParams params = opts.params();
    const LoadedScenarios loaded = load_input(input, opts, err);
    if (loaded.scenarios.empty()) throw Error("no events");
    const ValueMap map = load_value_map(map_path);

    std::vector<RankResult> by_value;
    std::vector<RankResult> by_product;
    for (std::size_t i = 0; i < loaded.scenarios.size(); ++i) {
        const Scenario& s = loaded.scenarios[i];
        if (!s.ground_truth_receiver) continue;
        ValueEvaluation ve;
        try {
            ve = combine_with_orientation(s, map, params, *kind);
        } catch (const Error& e) {
            throw Error("event " + std::to_string(i) + ": " + e.what());
        }
        auto rank_in = [&](const std::vector<std::size_t>& order) {
            for (std::size_t pos = 0; pos < order.size(); ++pos) {
                if (ve.entries[order[pos]].receiver_id == *s.ground_truth_receiver) return pos + 1;
            }
            return order.size() + 1;
        };
        const bool success = s.success.value_or(true);
        by_value.push_back({i, rank_in(ve.value_ranking), success});
        by_product.push_back({i, rank_in(ve.ranking), success});
    }
    if (by_value.empty()) throw Error("no events with ground truth");

    Sink sink(output, out);
    std::ostream& csv = sink.stream();
    csv << "model,top1_succ,top1_nsucc,top3_succ,top3_nsucc,n_events\n";
    const std::string label(to_string(*kind));
    for (const auto& [name, results] : {std::pair{label, &by_value}, std::pair{label + "*Fo", &by_product}}) {
        const TopX t1 = topx_accuracy(*results, 1);
        const TopX t3 = topx_accuracy(*results, 3);
        csv << name << ',' << format_fraction(t1.succ) << ',' << format_fraction(t1.nsucc) << ','
            << format_fraction(t3.succ) << ',' << format_fraction(t3.nsucc) << ',' << results->size() << '\n';
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pass feasibility from body orientation, defender pressure and proximity", "passfeas"};
    app.require_subcommand(1);

    ModelOptions model;

    std::string input;
    std::string output = "-";
    std::string mode = "F";
    auto* evaluate = app.add_subcommand("evaluate", "Per-receiver feasibility breakdown CSV for every event");
    evaluate->add_option("-i,--input", input, "Scenario file")->required();
    evaluate->add_option("-o,--output", output, "CSV path, '-' for stdout")->capture_default_str();
    evaluate->add_option("-m,--mode", mode, "Ranking score: F, Fpd, Fo, Fd, Fp")->capture_default_str();
    add_model_options(*evaluate, model, true);

    std::string output_dir = ".";
    std::vector<std::string> modes = {"F", "Fpd"};
    std::string split = "none";
    auto* report = app.add_subcommand("report", "Top-1/Top-3 tables and rank histograms");
    report->add_option("-i,--input", input, "Scenario file")->required();
    report->add_option("-o,--output-dir", output_dir, "Directory for report.csv and SVG histograms")
        ->capture_default_str();
    report->add_option("-m,--mode", modes, "Modes to compare")->delimiter(',')->capture_default_str();
    report->add_option("-s,--split", split, "none, position or phase")->capture_default_str();
    add_model_options(*report, model, true);

    SynthConfig synth_config;
    bool random_truth = false;
    auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic scenario corpus");
    synth->add_option("--seed", synth_config.seed, "Random seed")->capture_default_str();
    synth->add_option("-n,--n", synth_config.n_events, "Number of events")->capture_default_str();
    synth->add_option("--pressure", synth_config.pressure, "Marking tightness in [0, 1]")->capture_default_str();
    synth->add_option("--noise", synth_config.orientation_noise, "Orientation noise std, degrees")
        ->capture_default_str();
    synth->add_option("--temperature", synth_config.temperature, "Softmax temperature for sampled receivers")
        ->capture_default_str();
    synth->add_flag("--sampled-truth", random_truth,
                    "Draw the receiver by softmax over F instead of planting the best one");
    synth->add_option("-o,--output", output, "Scenario file, '-' for stdout")->capture_default_str();
    add_model_options(*synth, model, false);

    std::string map_path;
    std::string kind = "VP";
    auto* epv = app.add_subcommand("epv", "Top-X of an external value map alone and multiplied by F_o");
    epv->add_option("-i,--input", input, "Scenario file")->required();
    epv->add_option("--map", map_path, "Value map file")->required();
    epv->add_option("--kind", kind, "VP (pass probability) or VE (possession value)")->capture_default_str();
    epv->add_option("-o,--output", output, "CSV path, '-' for stdout")->capture_default_str();
    add_model_options(*epv, model, true);

    ServiceConfig service;
    auto* serve = app.add_subcommand("serve", "Run the HTTP what-if service");
    serve->add_option("--host", service.host, "Listen address")->envname("PASSFEAS_HOST")->capture_default_str();
    serve->add_option("--port", service.port, "Listen port")->envname("PASSFEAS_PORT")->capture_default_str();
    serve->add_option("--map-dir", service.map_dir, "Directory of *.map value maps")->envname("PASSFEAS_MAP_DIR");
    serve->add_option("--ui-dir", service.ui_dir, "Static UI files served at /")->envname("PASSFEAS_UI_DIR");
    serve->add_option("--psi", service.psi, "View-triangle half angle")->envname("PASSFEAS_PSI")->capture_default_str();
    serve->add_option("--J", service.neighbors, "Defenders per side")->envname("PASSFEAS_J")->capture_default_str();
    serve->add_option("--Q", service.smoothing_window, "Orientation window")->envname("PASSFEAS_Q")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*evaluate) return cmd_evaluate(input, output, mode, model, out, err);
        if (*report) return cmd_report(input, output_dir, modes, split, model, out, err);
        if (*synth) {
            synth_config.planted_best = !random_truth;
            return cmd_synth(synth_config, output, model, out);
        }
        if (*epv) return cmd_epv(input, map_path, kind, output, model, out, err);
        if (*serve) {
            if (!service.map_dir.empty() && !fs::is_directory(service.map_dir)) {
                throw Error("map directory '" + service.map_dir.string() + "' not found");
            }
            return run_service(service) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (char& c : msg) {
            if (c == '\n') c = ' ';
        }
        err << "passfeas: error: " << msg << '\n';
        return 1;
    }
    return 1;
}

}  // namespace passfeas
