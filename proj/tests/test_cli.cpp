#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace qdot;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::initializer_list<std::string> args) {
    std::vector<std::string> words{"qdot"};
    words.insert(words.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& w : words) argv.push_back(w.c_str());
    std::ostringstream out, err;
    const int code = run_cli(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("qdot_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("spectrum writes a table, a snapshot and a manifest") {
    const fs::path dir = scratch("spectrum");
    const Run r = run({"spectrum", "--preset", "device1", "--l-max", "3", "--out-dir", dir.string(), "--tag", "d1"});
    REQUIRE(r.code == kExitOk);
    const std::string csv = slurp(dir / "d1_spectrum.csv");
    CHECK(csv.rfind("sweep_param,l,n_r,E,P_inner\n", 0) == 0);
    const auto manifest = nlohmann::json::parse(slurp(dir / "d1_spectrum.json"));
    CHECK(manifest["command"] == "spectrum");
    CHECK(manifest["outputs"].size() == 2);
    CHECK(fs::exists(dir / "d1_spectrum.config"));
}

TEST_CASE("the config snapshot reproduces the run") {
    const fs::path a = scratch("snap_a"), b = scratch("snap_b");
    REQUIRE(run({"spectrum", "--preset", "device2", "--l-max", "2", "--out-dir", a.string()}).code == kExitOk);
    const fs::path snapshot = b / "rerun.config";
    std::string text = slurp(a / "run_spectrum.config");
    const auto pos = text.find(a.string());
    REQUIRE(pos != std::string::npos);
    text.replace(pos, a.string().size(), b.string());
    std::ofstream(snapshot) << text;
    REQUIRE(run({"spectrum", "--config", snapshot.string()}).code == kExitOk);
    CHECK(slurp(a / "run_spectrum.csv") == slurp(b / "run_spectrum.csv"));
    CHECK(slurp(b / "run_spectrum.config") == text);
}

TEST_CASE("unknown preset is a configuration error") {
    const Run r = run({"spectrum", "--preset", "device9", "--out-dir", scratch("bad").string()});
    CHECK(r.code == kExitConfig);
    CHECK(r.err.find("device9") != std::string::npos);
}

TEST_CASE("malformed config file is a configuration error") {
    const fs::path dir = scratch("malformed");
    std::ofstream(dir / "bad.config") << "[device]\npreset = device1\npreset = device2\n";
    CHECK(run({"spectrum", "--config", (dir / "bad.config").string()}).code == kExitConfig);
    std::ofstream(dir / "bad2.config") << "[device\n";
    CHECK(run({"spectrum", "--config", (dir / "bad2.config").string()}).code == kExitConfig);
}

TEST_CASE("command-line errors") {
    CHECK(run({}).code == kExitConfig);
    CHECK(run({"frobnicate"}).code == kExitConfig);
    CHECK(run({"spectrum", "--l-max", "many"}).code == kExitConfig);
    CHECK(run({"sweep", "sideways"}).code == kExitConfig);
    CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("a zero-amplitude drive leaves the qubit in place") {
    const fs::path dir = scratch("zero");
    const Run r = run({"drive", "--preset", "device1", "--a0", "0", "--t-max", "200", "--out-dir", dir.string()});
    REQUIRE(r.code == kExitOk);
    std::istringstream csv(slurp(dir / "run_trajectory.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "t,pop_q1,pop_q2,leakage,norm_deficit");
    int rows = 0;
    while (std::getline(csv, line)) {
        std::istringstream cells(line);
        std::string t, p1;
        std::getline(cells, t, ',');
        std::getline(cells, p1, ',');
        CHECK(std::stod(p1) == 1.0);
        ++rows;
    }
    CHECK(rows > 10);
}

TEST_CASE("sweep output does not depend on the worker count") {
    const fs::path dir = scratch("jobs");
    std::ofstream(dir / "s.config") << "[sweep.strength]\na0_meV_per_nm = [5, 10, 20]\n";
    const std::string cfg = (dir / "s.config").string();
    REQUIRE(run({"sweep", "strength", "--config", cfg, "--out-dir", dir.string(), "--tag", "one", "--jobs", "1"}).code ==
            kExitOk);
    REQUIRE(run({"sweep", "strength", "--config", cfg, "--out-dir", dir.string(), "--tag", "two", "--jobs", "2"}).code ==
            kExitOk);
    const std::string one = slurp(dir / "one_sweep_strength.csv");
    CHECK(one.rfind("A0,L_p\n", 0) == 0);
    CHECK(one == slurp(dir / "two_sweep_strength.csv"));
}

TEST_CASE("oracle-check reports the worst deviation") {
    const fs::path dir = scratch("oracle");
    const Run r = run({"oracle-check", "--preset", "device1", "--out-dir", dir.string()});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("max_abs_dE") != std::string::npos);
    CHECK(fs::exists(dir / "run_oracle.csv"));
}

}
