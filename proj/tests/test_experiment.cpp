#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mirror_margin/errors.hpp"
#include "mirror_margin/experiment.hpp"

using namespace mirror_margin;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string write_config(const std::string& name, const json& j) {
    fs::path dir = fs::temp_directory_path() / "mm_exp_tests";
    fs::create_directories(dir);
    fs::path path = dir / name;
    std::ofstream out(path);
    out << j.dump(2);
    return path.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json small_run_config(const std::string& out_dir) {
    return json{
        {"dataset",
         {{"generator",
           {{"n_pos", 6}, {"n_neg", 6}, {"center_pos", {2.0, 2.0}},
            {"center_neg", {-2.0, -2.0}}, {"spread", 0.5}, {"seed", 2}}}}},
        {"potential", {{"kind", "quadratic"}}},
        {"flow", {{"max_steps", 3000}, {"record_every", 50}}},
        {"gauge", "l2"},
        {"output", {{"dir", out_dir}, {"plots", true}}}};
}

}  // namespace

TEST_CASE("config loading validates its inputs") {
    CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent.json"), IoError);

    auto bad_json = write_config("bad.json", json{});
    {
        std::ofstream out(bad_json);
        out << "{ not json";
    }
    CHECK_THROWS_AS(ExperimentConfig::load(bad_json), ContractViolation);

    auto no_potential = write_config("nopot.json", json{{"gauge", "l2"}});
    CHECK_THROWS_AS(ExperimentConfig::load(no_potential), ContractViolation);

    auto no_seed = write_config(
        "noseed.json",
        json{{"dataset", {{"generator", {{"n_pos", 2}, {"n_neg", 2}}}}},
             {"potential", {{"kind", "quadratic"}}}});
    CHECK_THROWS_AS(ExperimentConfig::load(no_seed), ContractViolation);
}

TEST_CASE("effective config materializes every default") {
    auto path = write_config("minimal.json",
                             json{{"potential", {{"kind", "cosh_entropy"}}}});
    ExperimentConfig cfg = ExperimentConfig::load(path);
    json eff = cfg.effective();
    CHECK(eff.at("loss") == "exponential");
    CHECK(eff.at("flow").at("step_size") == 0.01);
    CHECK(eff.at("flow").at("rescaled") == true);
    CHECK(eff.at("gauge") == "auto");
    CHECK(eff.at("horizon").at("eps_degenerate") == 0.05);
}

TEST_CASE("potential and gauge specs resolve") {
    CHECK(make_potential(json{{"kind", "quadratic"}}, 3).dim() == 3);
    CHECK(make_potential(json{{"kind", "power_p"}, {"p", 3.0}}, 2).is_separable());
    auto per = make_potential(
        json{{"kind", "per_coordinate"},
             {"coords", {json{{"kind", "quadratic"}}, json{{"kind", "power_p"}, {"p", 4.0}}}}},
        2);
    CHECK(per.is_coordinatewise());
    CHECK_FALSE(per.is_separable());
    CHECK_THROWS_AS(make_potential(json{{"kind", "warp"}}, 2), ContractViolation);

    ExperimentConfig cfg;
    cfg.gauge_spec = "linf";
    auto p = VectorPotential::separable(ScalarPotential::quadratic(), 2);
    CHECK(resolve_gauge(cfg, p).kind() == GaugeKind::Linf);
    cfg.gauge_spec = json{{"kind", "lp"}, {"p", 2.5}};
    CHECK(resolve_gauge(cfg, p).kind() == GaugeKind::Lp);
    cfg.gauge_spec = json{{"kind", "mystery"}};
    CHECK_THROWS_AS(resolve_gauge(cfg, p), ContractViolation);
    cfg.gauge_spec = "auto";
    cfg.horizon_levels = {1e2, 1e4};
    cfg.horizon_grid = 64;
    CHECK(resolve_gauge(cfg, p).kind() == GaugeKind::Sampled);
}

TEST_CASE("cmd_run emits the full artifact bundle") {
    fs::path out = fs::temp_directory_path() / "mm_exp_tests" / "run_a";
    fs::remove_all(out);
    auto path = write_config("run.json", small_run_config(out.string()));
    ExperimentConfig cfg = ExperimentConfig::load(path);
    CHECK(cmd_run(cfg) == 0);

    for (const char* name :
         {"effective_config.json", "dataset.csv", "trajectory.csv", "limit_diagnostics.json",
          "margin_solution.json", "manifest.json", "loss_curves.svg", "data_path.svg",
          "gauge_ball.svg"})
        CHECK(fs::exists(out / name));

    json man = json::parse(slurp((out / "manifest.json").string()));
    CHECK(man.at("status") == "ok");

    json diag = json::parse(slurp((out / "limit_diagnostics.json").string()));
    CHECK(diag.at("directional_gap").get<double>() < 0.1);

    // SVGs are well formed XML envelopes
    std::string svg = slurp((out / "loss_curves.svg").string());
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);

    // trajectory header matches the documented layout for d=2, n=12
    std::string header = slurp((out / "trajectory.csv").string());
    header = header.substr(0, header.find('\n'));
    CHECK(header ==
          "record,time,loss,log_loss,beta_1,beta_2,dir_1,dir_2,q_1,q_2,q_3,q_4,q_5,q_6,q_7,q_8,"
          "q_9,q_10,q_11,q_12");
}

TEST_CASE("identical config and seed reproduce identical csv bytes") {
    fs::path out1 = fs::temp_directory_path() / "mm_exp_tests" / "repro1";
    fs::path out2 = fs::temp_directory_path() / "mm_exp_tests" / "repro2";
    fs::remove_all(out1);
    fs::remove_all(out2);
    auto p1 = write_config("repro1.json", small_run_config(out1.string()));
    auto p2 = write_config("repro2.json", small_run_config(out2.string()));
    REQUIRE(cmd_run(ExperimentConfig::load(p1)) == 0);
    REQUIRE(cmd_run(ExperimentConfig::load(p2)) == 0);
    CHECK(slurp((out1 / "trajectory.csv").string()) == slurp((out2 / "trajectory.csv").string()));
    CHECK(slurp((out1 / "dataset.csv").string()) == slurp((out2 / "dataset.csv").string()));
}

TEST_CASE("cmd_run names the failing stage and still writes a manifest") {
    fs::path out = fs::temp_directory_path() / "mm_exp_tests" / "run_fail";
    fs::remove_all(out);
    json j = small_run_config(out.string());
    j["dataset"] = {{"file", "/nonexistent/points.csv"}};
    auto path = write_config("runfail.json", j);
    CHECK(cmd_run(ExperimentConfig::load(path)) == 2);
    json man = json::parse(slurp((out / "manifest.json").string()));
    CHECK(man.at("status") == "failed");
    CHECK(man.at("failed_stage") == "dataset");
}

TEST_CASE("cmd_horizon flags the degenerate probe with exit code 2") {
    fs::path out = fs::temp_directory_path() / "mm_exp_tests" / "hz_degenerate";
    fs::remove_all(out);
    json j{{"potential",
            {{"kind", "per_coordinate"},
             {"coords", {json{{"kind", "quadratic"}}, json{{"kind", "power_p"}, {"p", 4.0}}}}}},
           {"horizon", {{"levels", {1e2, 1e4, 1e6, 1e8}}, {"grid", 90}}},
           {"output", {{"dir", out.string()}, {"plots", false}}}};
    auto path = write_config("hz_deg.json", j);
    CHECK(cmd_horizon(ExperimentConfig::load(path)) == 2);
    json man = json::parse(slurp((out / "manifest.json").string()));
    CHECK(man.at("failed_stage") == "gauge");
    json rep = json::parse(slurp((out / "horizon_report.json").string()));
    CHECK(rep.at("degenerate") == true);
}

TEST_CASE("cmd_horizon succeeds on the quadratic potential") {
    fs::path out = fs::temp_directory_path() / "mm_exp_tests" / "hz_quadratic";
    fs::remove_all(out);
    json j{{"potential", {{"kind", "quadratic"}}},
           {"horizon", {{"levels", {1e2, 1e4, 1e8}}, {"grid", 90}}},
           {"output", {{"dir", out.string()}, {"plots", true}}}};
    auto path = write_config("hz_quad.json", j);
    CHECK(cmd_horizon(ExperimentConfig::load(path)) == 0);
    CHECK(fs::exists(out / "horizon_levels.csv"));
    CHECK(fs::exists(out / "horizon_sets.svg"));
    json rep = json::parse(slurp((out / "horizon_report.json").string()));
    for (double g : rep.at("hausdorff_gaps").get<std::vector<double>>()) CHECK(g < 1e-12);
}

TEST_CASE("cmd_check passes clean configs and fails non-separable data") {
    auto good = write_config("check_good.json", small_run_config("unused"));
    CHECK(cmd_check(ExperimentConfig::load(good)) == 0);

    // XOR-style overlap: identical centers make separation hopeless, but the
    // generator throws; use a non-separable csv instead
    fs::path csv = fs::temp_directory_path() / "mm_exp_tests" / "xor.csv";
    {
        std::ofstream out(csv);
        out << "x1,x2,y\n1,1,1\n-1,-1,1\n1,-1,-1\n-1,1,-1\n";
    }
    json j{{"dataset", {{"file", csv.string()}}}, {"potential", {{"kind", "quadratic"}}}};
    auto bad = write_config("check_bad.json", j);
    CHECK(cmd_check(ExperimentConfig::load(bad)) == 2);
}

TEST_CASE("exit codes map the error taxonomy") {
    CHECK(exit_code_for(ContractViolation("x")) == 2);
    CHECK(exit_code_for(GeometryError("x")) == 2);
    CHECK(exit_code_for(GenerationError("x")) == 2);
    CHECK(exit_code_for(NumericError("x")) == 3);
    CHECK(exit_code_for(IoError("x")) == 4);
    CHECK(exit_code_for(std::runtime_error("x")) == 3);
}
