#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "logschroed/cli.hpp"
#include "logschroed/io.hpp"

using namespace logschroed;
namespace fs = std::filesystem;

namespace {

struct Sandbox {
    fs::path dir = fs::temp_directory_path() / ("logschroed_cli_" + std::to_string(::getpid()));
    Sandbox() { fs::create_directories(dir); }
    ~Sandbox() { fs::remove_all(dir); }

    fs::path config(const std::string& name, const std::string& text) const {
        const auto p = dir / name;
        std::ofstream(p) << text;
        return p;
    }
};

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json record(const fs::path& p) { return nlohmann::json::parse(read_file(p)); }

}  // namespace

TEST_CASE("solve recovers the Gausson and records the resolved config") {
    Sandbox sb;
    const auto out = sb.dir / "solve";
    const auto r = run({"solve", "--out", out.string(), "--quiet"});
    REQUIRE(r.code == cli::kPass);
    CHECK(r.out.empty());
    const auto j = record(out / "solve.json");
    const double beta = j["results"]["beta_star"];
    CHECK(std::abs(beta / std::exp(1.5) - 1) <= 1e-8);
    CHECK(j["config"]["potential.kind"] == "constant");
    CHECK(j["config"]["solver.r_max"] == 20.0);
    CHECK(j["results"]["bracket"].size() == 2);
    CHECK(j["results"]["classification_table"].size() == 32);
    const auto t = parse_csv(read_file(out / "profile.csv"));
    CHECK(t.header == std::vector<std::string>{"r", "u", "du"});
    CHECK(t.column("r")[100] == doctest::Approx(1.0));
    CHECK(std::abs(t.column("u")[100] - std::exp(1.5 - 0.5)) < 1e-6);
}

TEST_CASE("scan finds both decaying solutions of the inverted oscillator") {
    Sandbox sb;
    const auto cfg = sb.config("mu.cfg",
                               "potential.kind = inverted_harmonic\npotential.mu = 0.1875\n"
                               "scan.beta_hi = 20\nscan.points = 64\n");
    const auto out = sb.dir / "scan";
    REQUIRE(run({"scan", "--config", cfg.string(), "--out", out.string()}).code == cli::kPass);
    const auto j = record(out / "scan.json");
    CHECK(j["results"]["multiplicity"] == 2);
    CHECK(parse_csv(read_file(out / "roots.csv")).rows() == 2);
    CHECK(parse_csv(read_file(out / "scan.csv")).rows() == 64);
}

TEST_CASE("checkv2 verdicts map to exit codes") {
    Sandbox sb;
    const auto good = sb.config("good.cfg", "potential.kind = log_power\npotential.alpha1 = -1.5\n");
    const auto bad = sb.config("bad.cfg", "potential.kind = inverted_harmonic\npotential.mu = 0.1875\n");
    CHECK(run({"checkv2", "--config", good.string(), "--out", (sb.dir / "g").string()}).code == cli::kPass);
    CHECK(run({"checkv2", "--config", bad.string(), "--out", (sb.dir / "b").string()}).code == cli::kFail);
    CHECK(record(sb.dir / "b" / "checkv2.json")["results"]["verdict"] == "fail");
}

TEST_CASE("energy and spectrum records") {
    Sandbox sb;
    REQUIRE(run({"energy", "--out", sb.dir.string()}).code == cli::kPass);
    const auto e = record(sb.dir / "energy.json")["results"];
    CHECK(double(e["level_residual"]) <= 1e-5);
    CHECK(std::abs(double(e["I"]) / (0.5 * std::exp(3.0) * std::pow(M_PI, 1.5)) - 1) < 1e-4);
    REQUIRE(run({"spectrum", "--out", sb.dir.string()}).code == cli::kPass);
    const auto s = record(sb.dir / "spectrum.json")["results"];
    CHECK(s["verdict"] == "nondegenerate");
    CHECK(double(s["extrapolated"][0]) == doctest::Approx(-2.0).epsilon(1e-3));
}

TEST_CASE("configuration and usage errors exit with status 2") {
    Sandbox sb;
    const auto unknown = sb.config("u.cfg", "potential.kind = constant\nscan.typo = 3\n");
    auto r = run({"solve", "--config", unknown.string(), "--out", sb.dir.string()});
    CHECK(r.code == cli::kError);
    CHECK(r.err.find("line 2") != std::string::npos);
    CHECK(r.err.find("scan.typo") != std::string::npos);

    // A key valid for one subcommand is still foreign to another.
    const auto foreign = sb.config("f.cfg", "spectrum.h = 0.01\n");
    CHECK(run({"solve", "--config", foreign.string(), "--out", sb.dir.string()}).code == cli::kError);

    const auto nan = sb.config("n.cfg", "solver.tol = nan\n");
    CHECK(run({"solve", "--config", nan.string(), "--out", sb.dir.string()}).code == cli::kError);

    const auto kind = sb.config("k.cfg", "potential.kind = quartic\n");
    r = run({"solve", "--config", kind.string(), "--out", sb.dir.string()});
    CHECK(r.code == cli::kError);
    CHECK(r.err.find("line 1") != std::string::npos);

    CHECK(run({}).code == cli::kError);
    CHECK(run({"integrate"}).code == cli::kError);
    CHECK(run({"solve", "--threads", "-2"}).code == cli::kError);
    CHECK(run({"solve", "--config", (sb.dir / "absent.cfg").string()}).code == cli::kError);

    // No decaying solution in the window is a task error, not a verdict.
    const auto empty = sb.config("e.cfg", "scan.beta_lo = 0.5\nscan.beta_hi = 1\nscan.points = 4\n");
    CHECK(run({"solve", "--config", empty.string(), "--out", sb.dir.string()}).code == cli::kError);
}

TEST_CASE("CSV output does not depend on the thread count") {
    Sandbox sb;
    const auto cfg = sb.config("mu.cfg",
                               "potential.kind = inverted_harmonic\npotential.mu = 0.1875\n"
                               "scan.beta_hi = 20\nscan.points = 64\n");
    for (const char* t : {"1", "4"})
        REQUIRE(run({"scan", "--config", cfg.string(), "--threads", t, "--out", (sb.dir / t).string()}).code ==
                cli::kPass);
    for (const char* f : {"scan.csv", "roots.csv"})
        CHECK(read_file(sb.dir / "1" / f) == read_file(sb.dir / "4" / f));
}
