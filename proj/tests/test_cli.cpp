#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct Run {
    int status = -1;
    std::string out;
    std::string err;
};

const std::filesystem::path kScratch = std::filesystem::temp_directory_path() / "hyperlap_cli_test";

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Run run(const std::string& args) {
    std::filesystem::create_directories(kScratch);
    const std::filesystem::path err = kScratch / "stderr.txt";
    const std::string command = std::string("cd ") + HYPERLAP_SOURCE_DIR + " && " + HYPERLAP_CLI + " " + args +
                                " 2>" + err.string();
    Run r;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    for (std::size_t got; (got = std::fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, got);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.err = slurp(err);
    return r;
}

nlohmann::json error_line(const Run& r) {
    const std::string last = r.err.substr(r.err.rfind('{'));
    return nlohmann::json::parse(last);
}

}  // namespace

TEST_CASE("info on the four-vertex hyperedge") {
    const Run r = run("info --graph data/four_vertex.txt --p 2");
    CHECK(r.status == 0);
    CHECK(r.out.find("poincare_constant = 64\n") != std::string::npos);
    CHECK(r.out.find("components = 1\n") != std::string::npos);
    CHECK(r.out.find("zero_eigenspace_1 = 1 1 1 1\n") != std::string::npos);
}

TEST_CASE("solve-cauchy output is deterministic") {
    const std::string args = "solve-cauchy --graph data/two_components.txt --p 1.5 --T 0.5 --dt 0.01 --x0 1,-2,0.5,3,-1,2";
    const Run a = run(args);
    const Run b = run(args);
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("t,x_1,x_2,x_3,x_4,x_5,x_6,energy,residual\n", 0) == 0);
    std::istringstream rows(a.out);
    int lines = 0;
    for (std::string line; std::getline(rows, line);) ++lines;
    CHECK(lines == 1 + 51);

    const std::filesystem::path file = kScratch / "traj.csv";
    CHECK(run(args + " --out " + file.string()).status == 0);
    CHECK(slurp(file) == a.out);
}

TEST_CASE("flags override the config file") {
    const std::filesystem::path config = kScratch / "run.cfg";
    std::filesystem::create_directories(kScratch);
    std::ofstream(config) << "graph = data/four_vertex.txt\nx0 = 2,1,-1,-2\nT = 0.1\ndt = 0.05\n";
    const Run from_file = run("solve-cauchy --config " + config.string());
    const Run overridden = run("solve-cauchy --config " + config.string() + " --dt 0.01");
    CHECK(from_file.status == 0);
    CHECK(overridden.status == 0);
    CHECK(std::count(from_file.out.begin(), from_file.out.end(), '\n') == 1 + 3);
    CHECK(std::count(overridden.out.begin(), overridden.out.end(), '\n') == 1 + 11);

    std::ofstream(config) << "graph = data/four_vertex.txt\ncolour = blue\n";
    const Run unknown = run("info --config " + config.string());
    CHECK(unknown.status == 1);
    CHECK(error_line(unknown)["message"].get<std::string>().find("colour") != std::string::npos);
}

TEST_CASE("invalid input exits 1 with a JSON error line") {
    for (const char* args : {"info --graph data/four_vertex.txt --p 0.5",
                             "info --graph data/four_vertex.txt --dt 2 --T 1",
                             "info --graph data/missing.txt",
                             "solve-cauchy --graph data/four_vertex.txt",
                             "solve-cauchy --graph data/four_vertex.txt --x0 1,2,3",
                             "info --graph data/four_vertex.txt --tol-opt 0",
                             "reproduce --case no-such-case",
                             "no-such-command"}) {
        CAPTURE(args);
        const Run r = run(args);
        CHECK(r.status == 1);
        const nlohmann::json e = error_line(r);
        CHECK(e["exit"] == 1);
        CHECK(e.contains("error"));
        CHECK(e.contains("message"));
    }
    CHECK(run("--help").status == 0);
}

TEST_CASE("an unreachable solver tolerance exits 2") {
    const Run r = run("solve-cauchy --graph data/four_vertex.txt --p 1.5 --x0 2,1,-1,-2 --T 0.02 --dt 0.01 --tol-opt 1e-150");
    CHECK(r.status == 2);
    CHECK(error_line(r)["error"] == "NonConvergence");
}

TEST_CASE("incompatible forcing is refused before any stepping") {
    const std::filesystem::path signal = kScratch / "drift.csv";
    std::filesystem::create_directories(kScratch);
    std::ofstream(signal) << "t,h_1,h_2,h_3,h_4\n0,1,0,0,0\n1,1,0,0,0\n";
    const Run r = run("solve-periodic --graph data/four_vertex.txt --T 1 --dt 0.01 --signal " + signal.string());
    CHECK(r.status == 1);
    CHECK(r.out.find("compatibility_residuals = 0.25") != std::string::npos);
    CHECK(r.out.find("t,x_1") == std::string::npos);
    const nlohmann::json e = error_line(r);
    CHECK(e["error"] == "IncompatibleForcing");
    CHECK(e["message"].get<std::string>().find("compatibility") != std::string::npos);
}

TEST_CASE("solve-periodic writes the report and the orbit") {
    const std::filesystem::path report = kScratch / "cosh.txt";
    const Run r = run("solve-periodic --config data/cosh.cfg --dt 0.01 --out " + report.string());
    REQUIRE(r.status == 0);
    const std::string text = slurp(report);
    CHECK(text.find("eps_used = ") != std::string::npos);
    CHECK(slurp(report.string() + ".orbit.csv").rfind("t,x_1,x_2,x_3,x_4,energy,residual\n", 0) == 0);
}

TEST_CASE("reproduce and verify") {
    const Run c = run("reproduce --case cauchy-4vertex");
    CHECK(c.status == 0);
    CHECK(c.out.find("result = PASS") != std::string::npos);

    const Run v = run("verify --seed 1");
    CHECK(v.status == 0);
    CHECK(v.out.find("verify = PASS\n") != std::string::npos);
}
