#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "dicke/config.hpp"
#include "dicke/errors.hpp"
#include "dicke/io.hpp"
#include "dicke/runner.hpp"

using namespace dicke;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string parse_error(const json& doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("dicke_test_" + name);
    fs::remove_all(p);
    return p;
}

const json ladder_model = {{"ladder", true},
                           {"atom", {{"energies", {0, 1, 2}}, {"couplings", {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}}}}}};

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("parse_config: minimal two-level config gets documented defaults") {
    const RunConfig cfg = parse_config({{"command", "critical"}});
    CHECK(cfg.command == Command::critical);
    REQUIRE(cfg.model);
    CHECK(cfg.model->omega() == 1.0);
    CHECK(cfg.model->kappa() == 0.0);
    CHECK(cfg.critical.minimize.x_tol == 1e-6);
    CHECK(cfg.critical.minimize.grid_points == 400);
    CHECK(cfg.critical.jump_threshold == 0.05);
    CHECK(cfg.ed.lanczos.tolerance == 1e-10);
    CHECK(cfg.seed == default_seed);
    CHECK(cfg.seed_defaulted);
    const json echo = config_to_json(cfg);
    CHECK(echo["seed"] == default_seed);
    CHECK(echo["bracket"][1].get<double>() == 4.0);
}

TEST_CASE("parse_config: rejections name the field") {
    json ladder_bad = ladder_model;
    ladder_bad["atom"]["couplings"] = {{0, 0, 0.2}, {0, 0, 1}, {0.2, 1, 0}};
    CHECK(parse_error({{"command", "critical"}, {"model", ladder_bad}}).find("lambda_02") != std::string::npos);
    CHECK(parse_error({{"command", "critical"}, {"model", {{"omega", -1}}}}).starts_with("model.omega"));
    CHECK(parse_error({{"command", "critical"}, {"bogus", 1}}).starts_with("bogus: unknown key"));
    CHECK(parse_error({{"command", "critical"}, {"scan", {{"values", {1, 2}}}}}).find("not used by command") !=
          std::string::npos);
    CHECK(parse_error({{"command", "fly"}}).starts_with("command"));
    CHECK(parse_error({{"command", "meanfield-scan"}}).starts_with("scan: missing"));
    CHECK(parse_error({{"command", "meanfield-scan"}, {"scan", {{"values", {1, 0.5}}}}}).starts_with("scan.values"));
    CHECK(parse_error({{"command", "critical"}, {"axis", {{"coupling", {0, 3}}}}}).starts_with("axis.coupling"));
    CHECK(parse_error({{"command", "critical"}, {"tolerances", {{"grid_points", 50}}}}).starts_with("tolerances.grid_points"));
    CHECK(parse_error({{"command", "ed-nscan"}, {"ed", {{"n_atoms", {4, 0}}}}}).starts_with("ed.n_atoms[1]"));
    CHECK(parse_error({{"command", "no-go"}, {"no_go", {{"points", 10}}}}).starts_with("no_go.points"));
    CHECK(parse_error({{"command", "cpb-sweet-spot"}, {"cpb", {{"ec", 0}}}}).starts_with("cpb.ec"));
    CHECK(parse_error({{"command", "cpb-sweet-spot"}, {"cpb", {{"ng", 2.5}, {"n_cut", 6}}}}).starts_with("cpb.n_cut"));
    CHECK(parse_error({{"command", "critical"}, {"seed", -3}}).starts_with("seed"));
}

TEST_CASE("run: critical on the default two-level model") {
    const fs::path dir = scratch("critical");
    const auto files = run(parse_config({{"command", "critical"}}), dir);
    REQUIRE(files == std::vector<std::string>{"critical.json"});
    const json out = json::parse(slurp(dir / "critical.json"));
    CHECK(out["coupling_value"].get<double>() == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(out["order"] == "second");
    const json manifest = json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["outputs"][0]["file"] == "critical.json");
    CHECK(manifest["outputs"][0]["sha256"] == sha256_file(dir / "critical.json"));
    CHECK(manifest["seed"] == default_seed);
    CHECK(manifest["config"]["command"] == "critical");
}

TEST_CASE("parse_config: explicit optional sections are honoured") {
    const RunConfig cfg = parse_config(
        {{"command", "no-go"}, {"no_go", {{"lambda_max", 7.5}, {"points", 150}}}, {"tolerances", {{"x_tol", 1e-7}}}});
    CHECK(cfg.lambda_max == 7.5);
    CHECK(cfg.n_points == 150);
    CHECK(cfg.critical.minimize.x_tol == 1e-7);
}

TEST_CASE("run: no-go with the trk-ground rule") {
    const fs::path dir = scratch("nogo");
    run(parse_config({{"command", "no-go"}, {"axis", {{"kappa_rule", "trk-ground"}}}}), dir);
    CHECK(json::parse(slurp(dir / "no_go.json"))["no_transition"] == true);
}

TEST_CASE("run: ed-nscan writes one row per N with a shrinking gap to mean field") {
    const fs::path dir = scratch("nscan");
    json model = ladder_model;
    model["atom"]["couplings"] = {{0, 0, 0}, {0, 0, 1.5}, {0, 1.5, 0}};
    run(parse_config({{"command", "ed-nscan"}, {"model", model}, {"ed", {{"n_atoms", {4, 6, 8}}, {"dump_state", true}}}}),
        dir);
    std::istringstream csv(slurp(dir / "ed_nscan.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line ==
          "N,n_max_used,lambda_01,lambda_02,lambda_12,e0_per_atom,photon_density,quad,pop_0,pop_1,pop_2,parity,"
          "residual_norm,seed");
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 3);
    const json summary = json::parse(slurp(dir / "ed_nscan_summary.json"));
    CHECK(summary["gap_decreasing"] == true);
    CHECK(fs::exists(dir / "ground_state_N8.bin"));
}

TEST_CASE("run: every command emits its documented files") {
    json scan_model = ladder_model;
    const struct {
        json doc;
        std::vector<std::string> files;
        std::string header;
    } cases[] = {
        {{{"command", "meanfield-scan"},
          {"model", ladder_model},
          {"axis", {{"coupling", {1, 2}}}},
          {"scan", {{"start", 1.0}, {"stop", 1.4}, {"points", 9}}}},
         {"meanfield_scan.csv"},
         "coupling,x_star,e_star,pop_0,pop_1,pop_2,n_local_minima"},
        {{{"command", "ed-ground"}, {"ed", {{"n_max", 20}}}, {"model", {{"n_atoms", 4}}}},
         {"ed_ground.csv", "ed_ground.json"},
         "N,n_max_used,lambda_01,e0_per_atom,photon_density,quad,pop_0,pop_1,parity,residual_norm,seed"},
        {{{"command", "trk-check"}}, {"trk.json"}, ""},
        {{{"command", "cpb-sweet-spot"}, {"cpb", {{"sweep", {{"ej", {0.01, 0.05}}, {"ng", {0.25, 0.5}}}}}}},
         {"cpb_sweet_spot.json", "cpb_sweep.csv"},
         "ec,ej,ng,e_level_0,e_level_1,e_level_2,e_level_3,overlap_g,overlap_e,omega0_eff,charge_matrix_element"},
    };
    int k = 0;
    for (const auto& c : cases) {
        const fs::path dir = scratch("cmd" + std::to_string(k++));
        const auto files = run(parse_config(c.doc), dir);
        CHECK(files == c.files);
        if (!c.header.empty()) {
            const auto csv_name = c.files.front().ends_with(".csv") ? c.files.front() : c.files.back();
            CHECK(first_line(slurp(dir / csv_name)) == c.header);
        }
        CHECK(fs::exists(dir / "manifest.json"));
    }
}

TEST_CASE("run: identical config and seed give byte-identical artifacts") {
    const json doc = {{"command", "ed-ground"}, {"seed", 99}, {"model", {{"n_atoms", 6}, {"atom", {{"energies", {0, 1}}, {"couplings", {{0, 0.8}, {0.8, 0}}}}}}}};
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    const auto files = run(parse_config(doc), a);
    run(parse_config(doc), b, 3);
    for (const auto& f : files) CHECK(slurp(a / f) == slurp(b / f));
}

#ifdef DICKE_CLI_PATH
TEST_CASE("cli exit codes and error records") {
    const fs::path dir = scratch("cli");
    fs::create_directories(dir);
    const auto write = [&](const std::string& name, const json& doc) {
        std::ofstream(dir / name) << doc.dump();
        return (dir / name).string();
    };
    const auto invoke = [&](const std::string& cfg, const fs::path& out) {
        const std::string cmd = std::string(DICKE_CLI_PATH) + " --config " + cfg + " --output " + out.string() + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WEXITSTATUS(status);
    };
    CHECK(invoke(write("ok.json", {{"command", "trk-check"}}), dir / "ok") == 0);
    CHECK(fs::exists(dir / "ok" / "trk.json"));

    CHECK(invoke(write("bad.json", {{"command", "critical"}, {"model", {{"omega", -1}}}}), dir / "bad") == 2);
    const json err = json::parse(slurp(dir / "bad" / "error.json"));
    CHECK(err["category"] == "config");
    CHECK(err["message"].get<std::string>().starts_with("model.omega"));

    CHECK(invoke(write("nobracket.json", {{"command", "critical"}, {"bracket", {0.6, 1.0}}}), dir / "nb") == 2);

    CHECK(invoke(write("big.json", {{"command", "ed-ground"},
                                    {"model", {{"n_atoms", 50}}},
                                    {"ed", {{"n_max", 100}, {"dim_limit", 1000}}}}),
                 dir / "big") == 4);
    CHECK(json::parse(slurp(dir / "big" / "error.json"))["category"] == "resource");

    CHECK(invoke(write("stuck.json", {{"command", "ed-ground"},
                                      {"model", {{"n_atoms", 40}}},
                                      {"ed", {{"n_max", 100}}},
                                      {"tolerances", {{"lanczos_tol", 1e-300}}}}),
                 dir / "stuck") == 3);
    const json stuck = json::parse(slurp(dir / "stuck" / "error.json"));
    CHECK(stuck["category"] == "convergence");
    CHECK(stuck["best_residual"].get<double>() > 0.0);
}
#endif
