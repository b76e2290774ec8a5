#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qst/experiments.hpp"

using namespace qst;
using doctest::Approx;

namespace {

double cell(const ResultTable& t, std::size_t row, const std::string& col) {
    for (std::size_t c = 0; c < t.header.size(); ++c)
        if (t.header[c] == col) return std::stod(t.rows[row][c]);
    throw std::runtime_error("missing column " + col);
}

}  // namespace

TEST_CASE("fig2 table") {
    RunConfig config;
    config.command = "fig2";
    config.n_lo = 2;
    config.n_hi = 8;
    const CommandResult result = cmd_fig2(config);
    CHECK(result.table.rows.size() == 7);
    CHECK(cell(result.table, 0, "eta1_max") == Approx(1.0).epsilon(1e-6));
    CHECK(cell(result.table, 1, "eta1_max") == Approx(1.0).epsilon(1e-6));
    for (std::size_t r = 0; r < result.table.rows.size(); ++r)
        CHECK(cell(result.table, r, "eta1_max") > 0.5);
    const auto manifest = nlohmann::json::parse(result.manifest_json);
    CHECK(manifest["config"]["n_hi"] == 8);
    CHECK(manifest["seed"] == config.seed);
}

TEST_CASE("fig3 cumulative eta is monotone") {
    RunConfig config;
    config.command = "fig3";
    config.n_list = {5, 10};
    config.steps = 10;
    const CommandResult result = cmd_fig3(config);
    CHECK(result.table.rows.size() == 20);
    double prev = 0.0;
    for (std::size_t r = 0; r < result.table.rows.size(); ++r) {
        if (cell(result.table, r, "step") == 1.0) prev = 0.0;
        const double cum = cell(result.table, r, "eta_cum");
        CHECK(cum >= prev - 1e-12);
        CHECK(cum <= 1.0 + 1e-9);
        prev = cum;
    }
}

TEST_CASE("example5 summary") {
    RunConfig config;
    config.command = "example5";
    const CommandResult result = cmd_example5(config);
    const auto manifest = nlohmann::json::parse(result.manifest_json);
    const auto& summary = manifest["summary"];
    CHECK(summary["target_reached"].get<bool>());
    const int memories = summary["memories"].get<int>();
    CHECK(memories >= 13);
    CHECK(memories <= 17);
    CHECK(summary["eta_cumulative"].get<double>() >= 0.99);
    CHECK(summary["ratio"].get<double>() ==
          Approx(summary["t_bar_natural"].get<double>() /
                 summary["t_j_natural"].get<double>()));
    CHECK(summary["fidelity_min"].get<double>() == Approx(1.0).epsilon(1e-9));
    CHECK(summary["p_loss"].get<double>() < 0.011);
    // physical rendering consistent with the natural values
    CHECK(summary["t_j_ns"].get<double>() ==
          Approx(summary["t_j_natural"].get<double>() * 3.8191e-13 * 1e9)
              .epsilon(1e-4));
    CHECK(result.table.rows.size() == static_cast<std::size_t>(memories));
}

TEST_CASE("sweep") {
    RunConfig config;
    config.command = "sweep";
    config.n = 6;
    config.seeds = 3;
    config.steps = 25;
    config.eta_target = 0.95;

    SUBCASE("byte-identical reruns") {
        const CommandResult a = cmd_disorder_sweep(config);
        const CommandResult b = cmd_disorder_sweep(config);
        CHECK(a.table.to_csv() == b.table.to_csv());
        CHECK(a.pass);
    }
    SUBCASE("different seed changes the data") {
        const CommandResult a = cmd_disorder_sweep(config);
        RunConfig other = config;
        other.seed = config.seed + 1;
        const CommandResult b = cmd_disorder_sweep(other);
        CHECK(a.table.to_csv() != b.table.to_csv());
    }
    SUBCASE("zero disorder reduces to the uniform chain") {
        RunConfig uniform_cfg = config;
        uniform_cfg.delta = 0.0;
        uniform_cfg.seeds = 2;
        const CommandResult result = cmd_disorder_sweep(uniform_cfg);
        const MemoryBudget reference = memories_for_target(
            ChainSpec::uniform(6), 0.95, 25, uniform_cfg.scheduler_options());
        CHECK(cell(result.table, 0, "memories") == reference.memories);
        CHECK(cell(result.table, 1, "memories") == reference.memories);
        CHECK(cell(result.table, 0, "t_total") ==
              Approx(reference.schedule.total_time()));
    }
    SUBCASE("fidelity asserted per run") {
        const CommandResult result = cmd_disorder_sweep(config);
        for (int r = 0; r < config.seeds; ++r)
            CHECK(cell(result.table, r, "fidelity_min") ==
                  Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("verify command passes on a healthy build") {
    RunConfig config;
    config.command = "verify";
    config.seed = 20250810;
    const CommandResult result = cmd_verify(config);
    CHECK(result.pass);
    for (std::size_t r = 0; r < result.table.rows.size(); ++r)
        CHECK(result.table.rows[r].back() == "1");
}

TEST_CASE("config validation") {
    RunConfig config;
    config.command = "fig2";
    SUBCASE("bad range") {
        config.n_lo = 5;
        config.n_hi = 3;
        CHECK_THROWS_AS(cmd_fig2(config), std::invalid_argument);
    }
    SUBCASE("bad grid") {
        config.grid = 10;
        CHECK_THROWS_AS(cmd_fig2(config), std::invalid_argument);
    }
    SUBCASE("bad delta") {
        config.delta = 1.0;
        CHECK_THROWS_AS(cmd_fig2(config), std::invalid_argument);
    }
}

TEST_CASE("output files round-trip") {
    RunConfig config;
    config.command = "fig2";
    config.n_lo = 2;
    config.n_hi = 4;
    config.out_dir =
        (std::filesystem::temp_directory_path() / "qst_test_out").string();
    const CommandResult result = cmd_fig2(config);
    const OutputPaths paths = write_outputs(result, config);

    std::ifstream csv(paths.csv, std::ios::binary);
    std::stringstream buf;
    buf << csv.rdbuf();
    CHECK(buf.str() == result.table.to_csv());

    std::ifstream manifest_in(paths.manifest);
    const auto manifest = nlohmann::json::parse(manifest_in);
    CHECK(manifest["command"] == "fig2");
    CHECK(manifest["config"]["grid"] == config.grid);

    std::filesystem::remove_all(config.out_dir);
}
