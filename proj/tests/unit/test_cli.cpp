#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "occu/cli.hpp"
#include "occu/error.hpp"
#include "occu/experiment.hpp"
#include "occu/synth.hpp"

using namespace occu;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = occu::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

int tool(const std::string& args) {
    const int status = std::system((std::string(OCCU_TOOL_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

struct Workspace {
    fs::path dir;
    explicit Workspace(const std::string& name) : dir(fs::temp_directory_path() / ("occu_test_cli_" + name)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Workspace() { fs::remove_all(dir); }
    std::string operator/(const std::string& leaf) const { return (dir / leaf).string(); }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

// A week of synthetic data for three scopes, written as a dataset directory.
void small_dataset(const Workspace& ws) {
    REQUIRE(run_cli({"synth", "--out", ws / "ds", "--aps", "2", "--days", "7", "--seed", "3"}).code == 0);
}

}  // namespace

TEST_CASE("exit codes follow the error category") {
    CHECK(UsageError("x").exit_code() == 1);
    CHECK(DataError("x").exit_code() == 2);
    CHECK(NumericalError("x").exit_code() == 3);
    CHECK(tool("--version") == 0);
    CHECK(tool("--help") == 0);
    CHECK(tool("") == 1);
    CHECK(tool("ingest --bogus") == 1);
    CHECK(tool("ingest --log /nonexistent/log.csv --out /tmp/x.csv") == 2);
}

TEST_CASE("ingest") {
    Workspace ws("ingest");
    write_file(ws / "log.csv",
               "start,duration,device,ap\n1452852000,1200,A,AP1\n1452855000,1200,B,AP1\n1452852300,300,A,AP2\n");

    SUBCASE("hourly building series") {
        const auto r = run_cli({"ingest", "--log", ws / "log.csv", "--scale", "60", "--scope", "building", "--out",
                            ws / "b60.csv"});
        REQUIRE(r.code == 0);
        CHECK(lines(ws / "b60.csv") == std::vector<std::string>{"1452852000,2", "1452855600,1"});
        CHECK(fs::exists(ws / "b60.csv.manifest.json"));
    }
    SUBCASE("unknown access point") {
        const auto r = run_cli({"ingest", "--log", ws / "log.csv", "--scope", "ap:AP9", "--out", ws / "x.csv"});
        CHECK(r.code == 2);
        CHECK(r.err.find("scope not present in log") != std::string::npos);
    }
    SUBCASE("empty log") {
        write_file(ws / "empty.csv", "start,duration,device,ap\n");
        const auto r = run_cli({"ingest", "--log", ws / "empty.csv", "--scale", "30", "--from", "1452852000", "--to",
                            "1452857400", "--out", ws / "e.csv"});
        REQUIRE(r.code == 0);
        CHECK(lines(ws / "e.csv") == std::vector<std::string>{"1452852000,0", "1452853800,0", "1452855600,0"});
        CHECK(run_cli({"ingest", "--log", ws / "empty.csv", "--out", ws / "e2.csv"}).code == 1);
    }
    SUBCASE("bad scale and unaligned range") {
        CHECK(run_cli({"ingest", "--log", ws / "log.csv", "--scale", "20", "--out", ws / "x.csv"}).code == 1);
        CHECK(run_cli({"ingest", "--log", ws / "log.csv", "--from", "1452852060", "--to", "1452855660", "--out",
                   ws / "x.csv"})
                  .code == 1);
    }
    SUBCASE("malformed log reports the line") {
        write_file(ws / "bad.csv", "1452852000,10,A,AP1\n1452852000,-5,A,AP1\n");
        const auto r = run_cli({"ingest", "--log", ws / "bad.csv", "--out", ws / "x.csv"});
        CHECK(r.code == 2);
        CHECK(r.err.find("line 2") != std::string::npos);
    }
}

TEST_CASE("train and forecast with ARIMA") {
    Workspace ws("arima");
    small_dataset(ws);
    const auto series = ws / "ds/series_building_60.csv";

    const auto r = run_cli({"train", "--model", "arima", "--series", series, "--p", "0", "--d", "1", "--q", "0",
                        "--no-intercept", "--no-log", "--out", ws / "rw.model"});
    REQUIRE(r.code == 0);
    const auto f = run_cli({"forecast", "--model", ws / "rw.model", "--history", series, "--horizon", "3", "--out",
                        ws / "f.csv"});
    REQUIRE(f.code == 0);
    const auto out = lines(ws / "f.csv");
    REQUIRE(out.size() == 4);
    CHECK(out[0] == "interval_start,predicted_count");
    const auto hist = lines(series);
    const auto last = hist.back().substr(hist.back().find(',') + 1);
    CHECK(out[1].substr(out[1].find(',') + 1) == last + ".000000");

    REQUIRE(run_cli({"forecast", "--model", ws / "rw.model", "--history", series, "--horizon", "0", "--out",
                 ws / "f0.csv"})
                .code == 0);
    CHECK(lines(ws / "f0.csv") == std::vector<std::string>{"interval_start,predicted_count"});

    SUBCASE("order selection with a held-out test fraction") {
        const auto s = run_cli({"train", "--model", "arima", "--series", series, "--test-fraction", "0.2", "--out",
                            ws / "sel.model"});
        REQUIRE(s.code == 0);
        CHECK(s.out.find("test RMSE") != std::string::npos);
        const auto manifest = nlohmann::json::parse(slurp(ws / "sel.model.manifest.json"));
        CHECK(manifest["command"] == "train");
        CHECK(manifest["inputs"][0]["sha256"].get<std::string>().size() == 64);
    }
}

TEST_CASE("train and forecast with LSTM") {
    Workspace ws("lstm");
    small_dataset(ws);
    const auto s15 = ws / "ds/series_building_15.csv", s30 = ws / "ds/series_building_30.csv",
               s60 = ws / "ds/series_building_60.csv";

    SUBCASE("preset resolution") {
        const auto r = run_cli({"train", "--model", "lstm", "--preset", "table1:CombBuilding", "--epochs", "1", "--series15",
                            s15, "--series30", s30, "--series60", s60, "--out", ws / "comb.model"});
        REQUIRE(r.code == 0);
        CHECK(r.out.find("N=32 H=2 I=24 batch=16 epochs=1 combined") != std::string::npos);
        const auto bad = run_cli({"train", "--model", "lstm", "--preset", "table1:Sep45AP", "--series", s60, "--out",
                              ws / "x.model"});
        CHECK(bad.code == 1);
        CHECK(bad.err.find("Sep30AP") != std::string::npos);
        const auto wrong_scale = run_cli({"train", "--model", "lstm", "--preset", "table1:Sep30AP", "--epochs", "1",
                                      "--series", s60, "--out", ws / "x.model"});
        CHECK(wrong_scale.code == 1);
    }

    SUBCASE("combined forecast has three columns") {
        REQUIRE(run_cli({"train", "--model", "lstm", "--combined", "--neurons", "4", "--lag", "4", "--epochs", "2",
                     "--series15", s15, "--series30", s30, "--series60", s60, "--out", ws / "c.model"})
                    .code == 0);
        REQUIRE(run_cli({"forecast", "--model", ws / "c.model", "--history15", s15, "--history30", s30, "--history60",
                     s60, "--horizon", "2", "--out", ws / "cf.csv"})
                    .code == 0);
        const auto out = lines(ws / "cf.csv");
        REQUIRE(out.size() == 3);
        CHECK(out[0] == "interval_start,predicted_15,predicted_30,predicted_60");
        CHECK(std::count(out[1].begin(), out[1].end(), ',') == 3);
        CHECK(run_cli({"forecast", "--model", ws / "c.model", "--history60", s60, "--out", ws / "x.csv"}).code == 1);
    }

    SUBCASE("training is reproducible per seed") {
        const std::vector<std::string> base{"train", "--model", "lstm", "--neurons", "4", "--lag", "6", "--epochs",
                                            "3",     "--series", s15, "--seed", "5", "--out"};
        auto a = base, b = base, c = base;
        a.push_back(ws / "a.model");
        b.push_back(ws / "b.model");
        c.push_back(ws / "c.model");
        c[12] = "6";
        REQUIRE(run_cli(a).code == 0);
        REQUIRE(run_cli(b).code == 0);
        REQUIRE(run_cli(c).code == 0);
        CHECK(slurp(ws / "a.model") == slurp(ws / "b.model"));
        CHECK(slurp(ws / "a.model") != slurp(ws / "c.model"));

        REQUIRE(run_cli({"forecast", "--model", ws / "a.model", "--history", s15, "--horizon", "4", "--out",
                     ws / "fa.csv"})
                    .code == 0);
        CHECK(lines(ws / "fa.csv").size() == 5);
        CHECK(run_cli({"forecast", "--model", ws / "a.model", "--history", s60, "--horizon", "4", "--out", ws / "x.csv"})
                  .code == 2);
    }
}

TEST_CASE("compare") {
    Workspace ws("compare");

    SUBCASE("cost only") {
        const auto r = run_cli({"compare", "--cost-only", "--out", ws / "cost"});
        REQUIRE(r.code == 0);
        const auto cost = lines(ws / "cost/cost.csv");
        REQUIRE(cost.size() == 3);
        CHECK(cost[1].find("423,139,67.14") != std::string::npos);
        CHECK(cost[2].find("435,111,74.48") != std::string::npos);
        CHECK_FALSE(fs::exists(ws / "cost/results.csv"));
        CHECK(fs::exists(ws / "cost/manifest.json"));
    }

    SUBCASE("full matrix on a small dataset") {
        small_dataset(ws);
        write_file(ws / "grid.txt", "neurons = 2\nlayers = 1\nlags = 2\nbatch_sizes = 16\nepochs = 2\n");
        const auto r = run_cli({"compare", "--dataset", ws / "ds", "--grid", ws / "grid.txt", "--out", ws / "rep"});
        REQUIRE(r.code == 0);
        const auto table = lines(ws / "rep/results.csv");
        // Header, 18 summary cells, then 9 per-scope cells for each of the two access points.
        CHECK(table.size() == 1 + 18 + 18);
        CHECK(lines(ws / "rep/cost.csv")[1].find("67.14") != std::string::npos);
        for (const char* f : {"reductions.csv", "cost_used.csv", "chart.svg", "manifest.json"})
            CHECK(fs::exists(ws / (std::string("rep/") + f)));
    }

    SUBCASE("missing scale") {
        small_dataset(ws);
        fs::remove(ws / "ds/series_building_30.csv");
        const auto r = run_cli({"compare", "--dataset", ws / "ds", "--out", ws / "rep"});
        CHECK(r.code == 2);
        CHECK(r.err.find("30-minute") != std::string::npos);
    }
}

TEST_CASE("synth") {
    Workspace ws("synth");

    SUBCASE("default preset") {
        REQUIRE(run_cli({"synth", "--out", ws / "d"}).code == 0);
        const auto m = nlohmann::json::parse(slurp(ws / "d/manifest.json"));
        CHECK(m["options"]["aps"] == "18");
        CHECK(m["options"]["days"] == "42");
        CHECK(fs::exists(ws / "d/series_ap_AP18_15.csv"));
        const auto rows = lines(ws / "d/series_building_60.csv");
        CHECK(rows.size() == 42 * 24);
    }
    SUBCASE("same seed, same digests") {
        REQUIRE(run_cli({"synth", "--out", ws / "a", "--seed", "7", "--days", "3", "--aps", "2"}).code == 0);
        REQUIRE(run_cli({"synth", "--out", ws / "b", "--seed", "7", "--days", "3", "--aps", "2"}).code == 0);
        auto ma = nlohmann::json::parse(slurp(ws / "a/manifest.json"));
        auto mb = nlohmann::json::parse(slurp(ws / "b/manifest.json"));
        REQUIRE(ma["outputs"].size() == mb["outputs"].size());
        for (std::size_t k = 0; k < ma["outputs"].size(); ++k)
            CHECK(ma["outputs"][k]["sha256"] == mb["outputs"][k]["sha256"]);
        CHECK(slurp(ws / "a/sessions.csv") == slurp(ws / "b/sessions.csv"));
    }
    SUBCASE("invalid profile") {
        CHECK(run_cli({"synth", "--out", ws / "z", "--days", "0"}).code == 1);
        CHECK(run_cli({"synth", "--out", ws / "z", "--preset", "campus"}).code == 1);
    }
}
