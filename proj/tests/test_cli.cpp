#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "passfeas/cli.hpp"
#include "passfeas/data_io.hpp"
#include "test_support.hpp"

using namespace passfeas;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "passfeas");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("synth then report on a planted corpus") {
    testing::TempDir dir;
    const std::string corpus = (dir / "c.jsonl").string();
    REQUIRE(run({"synth", "--seed", "5", "-n", "40", "-o", corpus}).status == 0);
    const Run r = run({"report", "-i", corpus, "-o", dir.path().string(), "-m", "F,Fpd"});
    REQUIRE(r.status == 0);
    const auto rows = lines(slurp(dir / "report.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[1] == "all,F,1.000000,,1.000000,,40");
    CHECK(rows[2].rfind("all,Fpd,", 0) == 0);
    CHECK(rows[2].substr(rows[2].rfind(',')) == ",40");
    CHECK(std::filesystem::exists(dir / "hist_all_F.svg"));
    CHECK(std::filesystem::exists(dir / "hist_all_Fpd.svg"));
    CHECK(r.out == slurp(dir / "report.csv"));
}

TEST_CASE("report splits") {
    testing::TempDir dir;
    const std::string corpus = (dir / "c.jsonl").string();
    REQUIRE(run({"synth", "--seed", "9", "-n", "80", "--sampled-truth", "-o", corpus}).status == 0);
    for (const char* split : {"position", "phase"}) {
        const Run r = run({"report", "-i", corpus, "-o", dir.path().string(), "-s", split});
        REQUIRE(r.status == 0);
        std::size_t f = 0, pd = 0;
        for (const auto& row : lines(r.out)) {
            if (row.rfind("split_class", 0) == 0) continue;
            const std::size_t n = std::stoul(row.substr(row.rfind(',') + 1));
            (row.find(",F,") != std::string::npos ? f : pd) += n;
        }
        CHECK(f == 80);
        CHECK(pd == 80);
    }
}

TEST_CASE("errors are single diagnostic lines") {
    testing::TempDir dir;
    std::ofstream(dir / "empty.jsonl")
        << R"({"format":"passfeas-scenarios","version":1,"field":{"length_m":105,"width_m":68,"attack_direction":"+x"}})"
        << "\n";
    const Run empty = run({"report", "-i", (dir / "empty.jsonl").string(), "-o", dir.path().string()});
    CHECK(empty.status == 1);
    CHECK(empty.err == "passfeas: error: no events\n");

    const Run missing = run({"evaluate", "-i", (dir / "nope.jsonl").string()});
    CHECK(missing.status == 1);
    CHECK(missing.err.find("not found") != std::string::npos);

    const Run mode = run({"evaluate", "-i", (dir / "empty.jsonl").string(), "-m", "Q"});
    CHECK(mode.status == 1);
    CHECK(mode.err.find("unknown mode 'Q'") != std::string::npos);

    CHECK(run({}).status != 0);
    CHECK(run({"evaluate"}).status != 0);  // -i is required
}

TEST_CASE("evaluate writes one row per receiver") {
    const std::string path = std::string(PASSFEAS_TEST_DATA) + "/three_receivers.jsonl";
    const Run r = run({"evaluate", "-i", path, "-m", "Fpd"});
    REQUIRE(r.status == 0);
    const auto rows = lines(r.out);
    CHECK(rows[0] == "event_index,event,receiver,rank,score,F_o,F_dP,F_dR,F_d,F_p,F,F_pd,ground_truth");
    CHECK(rows.size() == 1 + 3 + 3);  // the goalkeeper receiver is dropped
    CHECK(r.err.find("goalkeeper") != std::string::npos);
}

TEST_CASE("epv subcommand") {
    testing::TempDir dir;
    const std::string corpus = (dir / "c.jsonl").string();
    REQUIRE(run({"synth", "--seed", "2", "-n", "30", "-o", corpus}).status == 0);
    save_value_map(dir / "flat.map", make_value_map(kValueMapWidth, kValueMapHeight,
                                                     std::vector<double>(kValueMapWidth * kValueMapHeight, 0.015)));
    const Run r = run({"epv", "-i", corpus, "--map", (dir / "flat.map").string(), "--kind", "VE"});
    REQUIRE(r.status == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "model,top1_succ,top1_nsucc,top3_succ,top3_nsucc,n_events");
    CHECK(rows[1].rfind("VE,", 0) == 0);
    CHECK(rows[2].rfind("VE*Fo,", 0) == 0);
    CHECK(run({"epv", "-i", corpus, "--map", (dir / "flat.map").string(), "--kind", "VZ"}).status == 1);
}

TEST_CASE("the installed binary is deterministic") {
    testing::TempDir dir;
    const std::string bin = PASSFEAS_CLI_PATH;
    for (int k = 0; k < 2; ++k) {
        const std::string tag = std::to_string(k);
        const std::string corpus = (dir / ("c" + tag + ".jsonl")).string();
        const std::string csv = (dir / ("e" + tag + ".csv")).string();
        REQUIRE(std::system((bin + " synth --seed 11 -n 25 -o " + corpus).c_str()) == 0);
        REQUIRE(std::system((bin + " evaluate -i " + corpus + " -o " + csv).c_str()) == 0);
    }
    CHECK(slurp(dir / "c0.jsonl") == slurp(dir / "c1.jsonl"));
    CHECK(slurp(dir / "e0.csv") == slurp(dir / "e1.csv"));
    CHECK_FALSE(slurp(dir / "e0.csv").empty());
}

TEST_CASE("documented invocations") {
    testing::TempDir dir;
    const std::string corpus = (dir / "c.jsonl").string();
    REQUIRE(run({"synth", "--seed", "7", "--n", "100", "-o", corpus}).status == 0);
    const Run r = run({"report", "-i", corpus, "-o", dir.path().string(), "--mode", "F"});
    REQUIRE(r.status == 0);
    CHECK(lines(r.out).at(1) == "all,F,1.000000,,1.000000,,100");

    const Run f = run({"evaluate", "-i", corpus, "--mode", "F"});
    const Run pd = run({"evaluate", "-i", corpus, "--mode", "Fpd"});
    REQUIRE(f.status == 0);
    REQUIRE(pd.status == 0);
    const auto fr = lines(f.out);
    const auto pr = lines(pd.out);
    CHECK(fr.size() == pr.size());
    CHECK(fr.size() == 1 + 100 * 9);
    std::size_t differing = 0;
    for (std::size_t i = 1; i < fr.size(); ++i) {
        // The score column (index 4) follows the mode; everything after it is shared.
        auto cell = [](const std::string& line, int k) {
            std::stringstream ss(line);
            std::string c;
            for (int i = 0; i <= k; ++i) std::getline(ss, c, ',');
            return c;
        };
        differing += cell(fr[i], 4) != cell(pr[i], 4);
        CHECK(cell(fr[i], 6) == cell(pr[i], 6));
    }
    CHECK(differing > 0);
}
