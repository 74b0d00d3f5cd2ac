#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stopctl/cli.hpp"

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "stopctl");
    std::vector<const char*> argv;
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = stopctl::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) {
        lines.push_back(line);
    }
    return lines;
}

}  // namespace

TEST_CASE("check passes on canonical parameters") {
    const Outcome o = run_cli({"check", "--v", "20", "--t-stop", "10", "--n", "10", "--m", "100"});
    CHECK(o.code == 0);
    CHECK(o.out.find("retrenchment correctness PO verdict: pass") != std::string::npos);
    CHECK(o.out.find("overall: pass") != std::string::npos);
    CHECK(o.err.empty());
}

TEST_CASE("check with an injected failing bound exits 1") {
    const Outcome o = run_cli({"check", "--o-bound-scale", "1e-6"});
    CHECK(o.code == 1);
    CHECK(o.out.find("verdict: fail_conclusion") != std::string::npos);
}

TEST_CASE("check CSV carries the witness table") {
    const Outcome o = run_cli({"check", "--format", "csv"});
    CHECK(o.code == 0);
    CHECK(o.out.rfind("relation,name,lhs,rhs,holds\n", 0) == 0);
    CHECK(o.out.find("corroboration,") != std::string::npos);
}

TEST_CASE("solve reports the closed-form values") {
    const Outcome o = run_cli({"solve", "--v", "20", "--t-stop", "10", "--n", "10"});
    CHECK(o.code == 0);
    CHECK(o.out.find("D = 133.333333333\n") != std::string::npos);
    CHECK(o.out.find("D_D = 130\n") != std::string::npos);
    CHECK(o.out.find("gap_exact = 3.33333333333\n") != std::string::npos);
    CHECK(o.out.find("a_D = 0.363636363636\n") != std::string::npos);
}

TEST_CASE("simulate emits the documented CSV columns") {
    const Outcome o = run_cli({"simulate", "--m", "4"});
    CHECK(o.code == 0);
    const auto lines = split_lines(o.out);
    REQUIRE(lines.size() == 42);
    CHECK(lines[0] == "t,x_cont,v_cont,x_zoh,v_zoh,abs_dx,abs_dv");
    CHECK(lines[1] == "0,0,20,0,20,0,0");
    CHECK(lines.back().rfind("10,133.333333333,", 0) == 0);
}

TEST_CASE("bound exits 0 when sound") {
    const Outcome o = run_cli({"bound", "--format", "csv"});
    CHECK(o.code == 0);
    CHECK(o.out.find("sound,1") != std::string::npos);
}

TEST_CASE("sweep gap column decreases strictly in N") {
    const Outcome o = run_cli({"sweep", "--v", "20", "--t-stop", "10", "--n-min", "1", "--n-max", "64", "--m", "10"});
    CHECK(o.code == 0);
    const auto lines = split_lines(o.out);
    REQUIRE(lines.size() == 65);
    CHECK(lines[0] == "N,T,a_D,D_D,gap_exact,l2_gap,gronwall_bound,po_verdict");
    double previous = 1e300;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::vector<std::string> cells;
        std::istringstream row(lines[i]);
        for (std::string cell; std::getline(row, cell, ',');) {
            cells.push_back(cell);
        }
        REQUIRE(cells.size() == 8);
        CHECK(std::stoll(cells[0]) == static_cast<long long>(i));
        const double gap = std::stod(cells[4]);
        CHECK(gap < previous);
        CHECK(gap == doctest::Approx(200.0 / (6.0 * static_cast<double>(i))).epsilon(1e-10));
        CHECK(cells[7] == "pass");
        previous = gap;
    }
}

TEST_CASE("sweep with doubling and report format") {
    const Outcome o = run_cli({"sweep", "--n-min", "1", "--n-max", "64", "--doubling", "--format", "report"});
    CHECK(o.code == 0);
    CHECK(split_lines(o.out).size() == 8);
}

TEST_CASE("usage and configuration errors exit 2") {
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"check", "--bogus"}).code == 2);
    CHECK(run_cli({"check", "--n", "ten"}).code == 2);
    CHECK(run_cli({"check", "--format", "xml"}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    const Outcome bad_v = run_cli({"solve", "--v", "0"});
    CHECK(bad_v.code == 2);
    CHECK(bad_v.err.find("velocity") != std::string::npos);
    CHECK(run_cli({"check", "--m", "0"}).code == 2);
    CHECK(run_cli({"sweep", "--n-min", "5", "--n-max", "2"}).code == 2);
    CHECK(run_cli({"check", "--output", "/nonexistent-dir/x.csv"}).code == 2);
}

TEST_CASE("help exits 0") {
    const Outcome o = run_cli({"--help"});
    CHECK(o.code == 0);
    CHECK(o.out.find("sweep") != std::string::npos);
}

TEST_CASE("output file matches stdout byte for byte") {
    const auto path = std::filesystem::temp_directory_path() / "stopctl_cli_test.csv";
    const Outcome to_file = run_cli({"simulate", "--m", "8", "--output", path.string()});
    CHECK(to_file.code == 0);
    CHECK(to_file.out.empty());
    std::ifstream in(path, std::ios::binary);
    const std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(written == run_cli({"simulate", "--m", "8"}).out);
    std::filesystem::remove(path);
}

TEST_CASE("the installed binary honours the exit-code contract") {
    const std::string bin = STOPCTL_CLI_PATH;
    auto status = [&](const std::string& args) {
        const int raw = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    CHECK(status("check --v 20 --t-stop 10 --n 10 --m 100") == 0);
    CHECK(status("check --o-bound-scale 0.000001") == 1);
    CHECK(status("check --v") == 2);
}
