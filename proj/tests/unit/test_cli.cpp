// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/handles.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = fs::temp_directory_path() /
                ("mrsde_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

json base_config() {
    return json::parse(R"({
      "schedule": {"family": "constant", "theta": 4.0, "sigma_inf": 1.0, "T": 1.0},
      "oracle": {"kind": "dirac", "x0": [1.0, -0.5], "predictor": "noise"},
      "mu": [0.2, 0.1],
      "sampler": {"family": "mr_sde", "parameterization": "data", "order": 1, "nfe": 5, "seed": 7},
      "chains": 1
    })");
}

std::string write_config(const TempDir& dir, const json& cfg, const std::string& name = "cfg.json") {
    const auto p = dir.path() / name;
    std::ofstream(p) << cfg.dump(2);
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

int run(const std::string& cmd, const std::string& config, const fs::path& out, std::vector<std::string> extra = {}) {
    std::vector<std::string> args = {cmd, "--config", config, "--out", out.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    return mrcli::run_cli(args);
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST_CASE("sample writes one row per state with the documented columns") {
    TempDir dir;
    const auto cfg = write_config(dir, base_config());
    REQUIRE(run("sample", cfg, dir.path() / "out") == 0);
    const auto rows = read_csv(dir.path() / "out" / "trajectories.csv");
    REQUIRE(rows.size() == 7);
    CHECK(rows[0] == std::vector<std::string>{"chain", "step", "t", "lambda", "x_0", "x_1"});
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].size() == 6);
    CHECK(rows[1][2] == "1");

    const auto summary = read_json(dir.path() / "out" / "summary.json");
    CHECK(summary["solver"] == "mr_sde_d_1");
    CHECK(summary["nfe"] == 5);
    CHECK(summary.contains("analytic_mean"));
    CHECK(summary["terminal_var"][0].is_null());
}

TEST_CASE("reruns are byte-identical and independent of the worker count") {
    TempDir dir;
    auto c = base_config();
    c["chains"] = 6;
    const auto cfg = write_config(dir, c);
    REQUIRE(run("sample", cfg, dir.path() / "a", {"--workers", "1"}) == 0);
    REQUIRE(run("sample", cfg, dir.path() / "b", {"--workers", "4"}) == 0);
    REQUIRE(run("sample", cfg, dir.path() / "c", {"--workers", "4"}) == 0);
    const auto a = slurp(dir.path() / "a" / "trajectories.csv");
    CHECK(a == slurp(dir.path() / "b" / "trajectories.csv"));
    CHECK(a == slurp(dir.path() / "c" / "trajectories.csv"));
    CHECK(a.find('\r') == std::string::npos);

    REQUIRE(run("sample", cfg, dir.path() / "d", {"--seed", "8"}) == 0);
    CHECK(a != slurp(dir.path() / "d" / "trajectories.csv"));
}

TEST_CASE("configuration errors exit with code 1") {
    TempDir dir;
    CHECK(mrcli::run_cli({"sample"}) == 1);
    CHECK(mrcli::run_cli({"nonsense", "--config", "x"}) == 1);
    CHECK(run("sample", (dir.path() / "missing.json").string(), dir.path() / "o") == 1);

    auto unknown = base_config();
    unknown["sampler"]["ordr"] = 2;
    CHECK(run("sample", write_config(dir, unknown, "u.json"), dir.path() / "o") == 1);

    auto velocity = base_config();
    velocity["sampler"]["parameterization"] = "velocity";
    CHECK(run("sample", write_config(dir, velocity, "v.json"), dir.path() / "o") == 1);

    auto mu = base_config();
    mu["mu"] = json::array({0.0});
    CHECK(run("sample", write_config(dir, mu, "m.json"), dir.path() / "o") == 1);

    std::ofstream(dir.path() / "bad.json") << "{ not json";
    CHECK(run("sample", (dir.path() / "bad.json").string(), dir.path() / "o") == 1);

    const auto ok = write_config(dir, base_config(), "ok.json");
    CHECK(run("sample", ok, dir.path() / "o", {"--nfe", "5,x"}) == 1);
    CHECK(run("sample", ok, dir.path() / "o", {"--workers", "0"}) == 1);
    CHECK(mrcli::run_cli({"sample", "--help"}) == 0);
}

TEST_CASE("runtime failures map to exit code 2") {
    try {
        mrcli::check(MRS_ERR_NUMERICAL, "sample");
        FAIL("expected a throw");
    } catch (const mrcli::RunError& e) {
        CHECK(e.exit_code() == 2);
    }
    try {
        mrcli::check(MRS_ERR_CALLBACK, "sample");
        FAIL("expected a throw");
    } catch (const mrcli::RunError& e) {
        CHECK(e.exit_code() == 2);
    }
    try {
        mrcli::check(MRS_ERR_INVALID_ARGUMENT, "sample");
        FAIL("expected a throw");
    } catch (const mrcli::RunError& e) {
        CHECK(e.exit_code() == 1);
    }
    CHECK_NOTHROW(mrcli::check(MRS_OK, "sample"));
}

TEST_CASE("summary variance matches the closed form over many chains") {
    TempDir dir;
    auto c = base_config();
    c["chains"] = 10000;
    c["workers"] = 4;
    c["outputs"] = {{"trajectories", false}};
    REQUIRE(run("sample", write_config(dir, c), dir.path() / "out") == 0);
    CHECK_FALSE(fs::exists(dir.path() / "out" / "trajectories.csv"));
    const auto s = read_json(dir.path() / "out" / "summary.json");
    for (int k = 0; k < 2; ++k) {
        const double var = s["terminal_var"][k];
        const double exact = s["analytic_var"][k];
        CHECK(std::abs(var / exact - 1.0) < 0.05);
        const double mean = s["terminal_mean"][k];
        const double exact_mean = s["analytic_mean"][k];
        CHECK(std::abs(mean - exact_mean) < 4.0 * std::sqrt(exact / 10000.0));
    }
}

TEST_CASE("compare-baselines writes the documented table") {
    TempDir dir;
    auto c = base_config();
    c["chains"] = 8;
    c["nfe_list"] = {5, 10};
    REQUIRE(run("compare-baselines", write_config(dir, c), dir.path() / "out") == 0);
    const auto rows = read_csv(dir.path() / "out" / "compare.csv");
    REQUIRE(rows.size() == 1 + 6 * 2);
    CHECK(rows[0] == std::vector<std::string>{"method", "nfe", "rmse", "terminal_mean_err", "terminal_var_err"});
    std::vector<std::string> names;
    for (std::size_t i = 1; i < rows.size(); i += 2) names.push_back(rows[i][0]);
    CHECK(names == std::vector<std::string>{"mr_sde_n_1", "mr_ode_n_1", "mr_sde_d_1", "mr_ode_d_1", "posterior",
                                            "euler_maruyama"});

    auto data_oracle = c;
    data_oracle["oracle"]["predictor"] = "data";
    CHECK(run("compare-baselines", write_config(dir, data_oracle, "d.json"), dir.path() / "o2") == 1);
}

TEST_CASE("radius-report: constant noise output converges at every step") {
    TempDir dir;
    auto c = base_config();
    c["oracle"] = {{"kind", "constant_noise"}, {"c", {0.3, -0.2}}, {"predictor", "noise"}};
    c["sampler"]["family"] = "mr_ode";
    c["sampler"]["nfe"] = 8;
    REQUIRE(run("radius-report", write_config(dir, c), dir.path() / "out") == 0);
    for (const char* p : {"noise", "data"}) {
        const auto rows = read_csv(dir.path() / "out" / p / "radius.csv");
        REQUIRE(rows.size() == 8);
        CHECK(rows[0] == std::vector<std::string>{"step", "t", "lambda", "h", "ratio"});
        for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].size() == 5);
    }
    for (std::size_t i = 1; i < 8; ++i) CHECK(read_csv(dir.path() / "out" / "noise" / "radius.csv")[i][4] == "1");
    const auto s = read_json(dir.path() / "out" / "radius_summary.json");
    CHECK(s["noise"]["mean_ratio"] == 1.0);
}

TEST_CASE("convergence-study with zero noise prediction is exact at every NFE") {
    TempDir dir;
    auto c = base_config();
    c["oracle"] = {{"kind", "constant_noise"}, {"c", {0.0, 0.0}}, {"predictor", "noise"}};
    c["sampler"]["parameterization"] = "noise";
    c["chains"] = 3;
    c["nfe_list"] = {5, 10, 20};
    REQUIRE(run("convergence-study", write_config(dir, c), dir.path() / "out") == 0);
    const auto rows = read_csv(dir.path() / "out" / "order_study.csv");
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == std::vector<std::string>{"nfe", "rmse_vs_reference"});
    for (std::size_t i = 1; i <= 3; ++i) CHECK(std::stod(rows[i][1]) < 1e-10);
    CHECK(rows[4] == std::vector<std::string>{"order", "n/a"});
}

TEST_CASE("convergence-study: second-order data ODE beats first order") {
    TempDir dir;
    auto c = base_config();
    c["oracle"] = {{"kind", "gaussian"}, {"m0", {1.0, -0.5}}, {"s0", 0.5}, {"predictor", "noise"}};
    c["sampler"]["family"] = "mr_ode";
    c["chains"] = 4;
    c["nfe_list"] = {10, 20, 40};
    std::vector<double> first;
    std::vector<double> second;
    std::string order2;
    for (int order : {1, 2}) {
        c["sampler"]["order"] = order;
        const auto out = dir.path() / ("o" + std::to_string(order));
        REQUIRE(run("convergence-study", write_config(dir, c, "c" + std::to_string(order) + ".json"), out) == 0);
        const auto rows = read_csv(out / "order_study.csv");
        REQUIRE(rows.size() == 5);
        for (std::size_t i = 1; i <= 3; ++i) (order == 1 ? first : second).push_back(std::stod(rows[i][1]));
        if (order == 2) order2 = rows[4][1];
    }
    for (std::size_t i = 0; i < 3; ++i) CHECK(second[i] < first[i]);
    CHECK(std::stod(order2) >= 1.7);
}

TEST_CASE("trajectory: shared basis, method order does not matter") {
    TempDir dir;
    auto c = base_config();
    c["oracle"] = {{"kind", "gaussian"}, {"m0", {1.0, -0.5, 0.25}}, {"s0", 0.3}, {"predictor", "noise"}};
    c["mu"] = {0.2, 0.1, -0.3};
    c["sampler"]["nfe"] = 100;
    c["methods"] = {"mr_sde_d_1", "euler_maruyama"};
    REQUIRE(run("trajectory", write_config(dir, c, "a.json"), dir.path() / "a") == 0);
    c["methods"] = {"euler_maruyama", "mr_sde_d_1"};
    REQUIRE(run("trajectory", write_config(dir, c, "b.json"), dir.path() / "b") == 0);

    const auto a = read_json(dir.path() / "a" / "trajectory_summary.json");
    const auto b = read_json(dir.path() / "b" / "trajectory_summary.json");
    CHECK(a["methods"][0]["method"] == "mr_sde_d_1");
    CHECK(double(a["methods"][0]["path_length"]) == doctest::Approx(double(b["methods"][1]["path_length"])).epsilon(1e-9));
    CHECK(double(a["methods"][1]["path_length"]) == doctest::Approx(double(b["methods"][0]["path_length"])).epsilon(1e-9));
    CHECK(double(a["explained_variance"][0]) == doctest::Approx(double(b["explained_variance"][0])).epsilon(1e-9));

    const auto rows = read_csv(dir.path() / "a" / "trajectory_2d.csv");
    CHECK(rows[0] == std::vector<std::string>{"method", "step", "pc1", "pc2"});
    CHECK(rows.size() == 1 + 2 * 101);

    auto one_d = base_config();
    one_d["oracle"]["x0"] = {1.0};
    one_d["mu"] = {0.0};
    CHECK(run("trajectory", write_config(dir, one_d, "c.json"), dir.path() / "c") == 1);
}

TEST_CASE("trajectory: the data-form MR path is shorter than Euler-Maruyama") {
    TempDir dir;
    auto c = base_config();
    c["oracle"] = {{"kind", "gaussian"}, {"m0", {1.0, -0.5, 0.25, 2.0}}, {"s0", 0.3}, {"predictor", "noise"}};
    c["mu"] = {0.2, 0.1, -0.3, 0.5};
    c["sampler"]["nfe"] = 100;
    c["methods"] = {"mr_sde_d_1", "euler_maruyama"};
    REQUIRE(run("trajectory", write_config(dir, c), dir.path() / "out") == 0);
    const auto s = read_json(dir.path() / "out" / "trajectory_summary.json");
    CHECK(double(s["methods"][0]["path_length"]) < double(s["methods"][1]["path_length"]));
}
