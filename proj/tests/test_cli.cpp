#include "clmf/experiment.hpp"
#include "clmf/spectral.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("clmf_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string write_config(const fs::path& dir, const std::string& text)
{
    const fs::path p = dir / "config.json";
    std::ofstream(p) << text;
    return p.string();
}

std::map<std::string, std::string> snapshot(const fs::path& dir)
{
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().filename() == "timestamp.txt") continue;
        std::ifstream is(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << is.rdbuf();
        out[e.path().filename().string()] = ss.str();
    }
    return out;
}

}  // namespace

TEST_CASE("schema violations exit with status 2")
{
    const auto dir = scratch("schema");
    std::ostringstream log;
    clmf::RunOptions opts;
    opts.out_dir = (dir / "out").string();
    CHECK(clmf::run("stationary", write_config(dir, "{}"), opts, log) == 2);
    CHECK(log.str().find("seed") != std::string::npos);
    CHECK(clmf::run("stationary", write_config(dir, "{\"seed\": 1, "), opts, log) == 2);
    CHECK(clmf::run("stationary", write_config(dir, R"({"seed": 1, "k": "two"})"), opts, log) == 2);
    CHECK(clmf::run("stationary", write_config(dir, R"({"seed": 1, "scaling": {"regime": "chaos"}})"), opts, log) == 2);
    CHECK(clmf::run("nonsense", write_config(dir, R"({"seed": 1})"), opts, log) == 2);
    CHECK(clmf::run("stationary", (dir / "missing.json").string(), opts, log) == 2);
}

TEST_CASE("seed override satisfies the mandatory field")
{
    clmf::RunOptions opts;
    opts.seed = 5;
    const auto cfg = clmf::resolve_config("constants", json::object(), opts);
    CHECK(cfg.at("seed") == 5);
    CHECK(cfg.at("k") == 2);
    CHECK(cfg.at("radius") == 64);
    CHECK(cfg.at("mc").at("runs") == 200);
}

TEST_CASE("stationary pipeline writes the hierarchy")
{
    const auto dir = scratch("stationary");
    std::ostringstream log;
    clmf::RunOptions opts;
    opts.out_dir = (dir / "out").string();
    REQUIRE(clmf::run("stationary", write_config(dir, R"({"seed": 1, "m2": 1, "K": 3})"), opts, log) == 0);
    std::ifstream is(dir / "out" / "stationary.json");
    const json j = json::parse(is);
    CHECK(j.at("cross_validation").get<double>() <= 1e-10);
    const auto nu1 = j.at("orders")[0].at("nu").get<clmf::SpectralCoefficients>();
    CHECK(nu1({1}).real() == doctest::Approx(2.0 / 3));
    std::ifstream ms(dir / "out" / "manifest.json");
    const json manifest = json::parse(ms);
    CHECK(manifest.at("config_hash").get<std::string>().size() == 16);
    CHECK(manifest.at("resolved_config").at("K") == 3);
    CHECK(fs::exists(dir / "out" / "timestamp.txt"));
}

TEST_CASE("density pipeline reproduces H")
{
    const auto dir = scratch("density");
    std::ostringstream log;
    clmf::RunOptions opts;
    opts.out_dir = (dir / "out").string();
    REQUIRE(clmf::run("density", write_config(dir, R"({"seed": 1, "m2": 1, "grid": 64})"), opts, log) == 0);
    std::ifstream is(dir / "out" / "h_density.csv");
    std::string line;
    std::getline(is, line);
    CHECK(line == "theta_1,value");
    double at_zero = 0.0;
    while (std::getline(is, line)) {
        const auto comma = line.find(',');
        if (std::stod(line.substr(0, comma)) == 0.0) at_zero = std::stod(line.substr(comma + 1));
    }
    CHECK(at_zero == doctest::Approx(4.444112).epsilon(1e-6));
}

TEST_CASE("repeated runs are byte-identical")
{
    const auto dir = scratch("determinism");
    const std::string cfg = write_config(dir, R"({"seed": 99, "k": 1, "scaling": {"N": [16]},
        "initial": {"kind": "chaotic", "profile": {"name": "wrapped_cauchy", "params": {"rho": 0.7, "theta0": 0.2}}},
        "times": [0.0, 0.5], "mc": {"runs": 20, "threads": 2}})");
    for (const std::string cmd : {"simulate", "evolve-finite", "constants"}) {
        clmf::RunOptions opts;
        opts.out_dir = (dir / "out").string();
        std::ostringstream log;
        fs::remove_all(dir / "out");
        REQUIRE(clmf::run(cmd, cfg, opts, log) == 0);
        const auto first = snapshot(dir / "out");
        fs::remove_all(dir / "out");
        opts.threads = 1;
        REQUIRE(clmf::run(cmd, cfg, opts, log) == 0);
        auto second = snapshot(dir / "out");
        // the thread count is part of the resolved config, so compare everything but the manifest here
        second.erase("manifest.json");
        auto first_wo = first;
        first_wo.erase("manifest.json");
        CHECK(first_wo == second);
    }
}

TEST_CASE("fnv1a64 reference values")
{
    CHECK(clmf::fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(clmf::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}
