#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "darboux/cli.hpp"
#include "darboux/errors.hpp"
#include "darboux/exports.hpp"

using namespace darboux;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const std::string& name, const std::string& body) {
    const fs::path dir = fs::path("cli_test_tmp");
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    out << body;
    return p;
}

const char* kBaseConfig = R"({
  "eps": [0.5],
  "delta": [],
  "direction": {"Q": [[0,0,0],[0,1,0],[0,0,0]]},
  "grid_n": 24,
  "outdir": "cli_test_tmp/OUT"
})";

}  // namespace

TEST_CASE("config validation") {
    CHECK_THROWS_AS(parse_config_json("{\"eps\": []}"), ConfigError);
    CHECK_THROWS_AS(parse_config_json("{\"eps\": [-1.0]}"), ConfigError);
    CHECK_THROWS_AS(parse_config_json("{\"eps\": [0.5], \"r_max\": 0.5}"), ConfigError);
    CHECK_THROWS_AS(parse_config_json("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config_json("{\"formats\": [\"png\"]}"), ConfigError);
    const ExperimentConfig cfg = parse_config_json(kBaseConfig);
    CHECK(cfg.eps_values.size() == 1);
    CHECK(cfg.hash_hex().size() == 16);
}

TEST_CASE("unknown arguments exit with the config code") {
    CHECK(run_cli({"nonsense"}) == 2);
    CHECK(run_cli({"isoclines"}) == 2);  // missing --config
    const auto cfg = write_config("bad.json", "{\"eps\": [0]}");
    CHECK(run_cli({"isoclines", "--config", cfg.string()}) == 2);
}

TEST_CASE("isoclines command writes curves and reruns byte-identically") {
    const auto cfg = write_config("iso.json", kBaseConfig);
    REQUIRE(run_cli({"isoclines", "--config", cfg.string(),
                     "--outdir", "cli_test_tmp/OUT_A"}) == 0);
    REQUIRE(run_cli({"isoclines", "--config", cfg.string(),
                     "--outdir", "cli_test_tmp/OUT_B"}) == 0);
    const std::string a = slurp("cli_test_tmp/OUT_A/isoclines_eps0.5.csv");
    const std::string b = slurp("cli_test_tmp/OUT_B/isoclines_eps0.5.csv");
    CHECK(a == b);
    CHECK(a.find("curve_id") != std::string::npos);
    CHECK(fs::exists("cli_test_tmp/OUT_A/isoclines_eps0.5.svg"));
}

TEST_CASE("cycles command: empty delta list runs the baseline with zero cycles") {
    const auto cfg = write_config("cyc.json", kBaseConfig);
    REQUIRE(run_cli({"cycles", "--config", cfg.string(),
                     "--outdir", "cli_test_tmp/OUT_C"}) == 0);
    const json rep = json::parse(slurp("cli_test_tmp/OUT_C/cycles_report.json"));
    REQUIRE(rep.contains("cells"));
    REQUIRE(rep["cells"].size() == 1);
    CHECK(rep["cells"][0]["delta"].get<double>() == 0.0);
    CHECK(rep["cells"][0]["cycles"].empty());
    CHECK(rep["config_hash"].get<std::string>().size() == 16);
}

TEST_CASE("dulac and blowup commands succeed") {
    const auto cfg = write_config("rest.json", kBaseConfig);
    REQUIRE(run_cli({"dulac", "--config", cfg.string(),
                     "--outdir", "cli_test_tmp/OUT_D"}) == 0);
    CHECK(fs::exists("cli_test_tmp/OUT_D/dulac_report.json"));
    REQUIRE(run_cli({"blowup", "--config", cfg.string(),
                     "--outdir", "cli_test_tmp/OUT_E"}) == 0);
    CHECK(fs::exists("cli_test_tmp/OUT_E/blowup_residuals.csv"));
    CHECK(fs::exists("cli_test_tmp/OUT_E/blowup_limit_portrait.svg"));
}

TEST_CASE("portrait command draws the annulus") {
    const auto cfg = write_config("por.json", kBaseConfig);
    REQUIRE(run_cli({"portrait", "--config", cfg.string(),
                     "--outdir", "cli_test_tmp/OUT_P"}) == 0);
    CHECK(fs::exists("cli_test_tmp/OUT_P/portrait_eps0.5_delta0.svg"));
    CHECK(fs::exists("cli_test_tmp/OUT_P/portrait_eps0.5_delta0.csv"));
}

TEST_CASE("bound command reproduces the stored reference table") {
    // reference run: eps = 0.5, delta = 1e-4, direction Q = x(y - 0.386);
    // the table was frozen from the first run of this configuration
    const fs::path cfg = fs::path(DARBOUX_SOURCE_DIR) / "configs/reference_bound.json";
    const fs::path ref = fs::path(DARBOUX_SOURCE_DIR) / "tests/data/reference_bound.json";
    REQUIRE(fs::exists(cfg));
    REQUIRE(run_cli({"bound", "--config", cfg.string(),
                     "--outdir", "cli_test_tmp/OUT_REF"}) == 0);
    const json got = json::parse(slurp("cli_test_tmp/OUT_REF/bound_experiment.json"));
    const json want = json::parse(slurp(ref));
    REQUIRE(got["cells"].size() == want["cells"].size());
    CHECK(got["config_hash"] == want["config_hash"]);
    for (std::size_t i = 0; i < got["cells"].size(); ++i) {
        const auto& g = got["cells"][i];
        const auto& w = want["cells"][i];
        CHECK(g["bound"].get<int>() == w["bound"].get<int>());
        CHECK(g["real_cycles"].get<int>() == w["real_cycles"].get<int>());
        CHECK(g["melnikov_zeros"].get<int>() == w["melnikov_zeros"].get<int>());
        CHECK(g["total_variation"].get<double>() ==
              doctest::Approx(w["total_variation"].get<double>()).epsilon(1e-9));
    }
}

TEST_CASE("bound command on the delta = 0 baseline") {
    const auto cfg = write_config("bnd.json", kBaseConfig);
    REQUIRE(run_cli({"bound", "--config", cfg.string(),
                     "--outdir", "cli_test_tmp/OUT_F"}) == 0);
    const json rep = json::parse(slurp("cli_test_tmp/OUT_F/bound_experiment.json"));
    REQUIRE(rep["cells"].size() == 1);
    CHECK(rep["cells"][0]["bound"].get<int>() == 0);
    CHECK(rep["cells"][0]["real_cycles"].get<int>() == 0);
    CHECK_FALSE(rep["any_bound_violation"].get<bool>());
}
