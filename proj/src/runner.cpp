#include "dicke/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>

#include <openssl/evp.h>

#include "dicke/errors.hpp"
#include "dicke/io.hpp"
#include "dicke/parallel.hpp"

namespace dicke {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Outputs {
public:
    explicit Outputs(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    std::ofstream open(const std::string& name, bool binary = false) {
        names_.push_back(name);
        std::ofstream out(dir_ / name, binary ? std::ios::binary : std::ios::out);
        if (!out) throw std::runtime_error("cannot open " + (dir_ / name).string() + " for writing");
        return out;
    }

    void json_file(const std::string& name, const json& doc) { open(name) << doc.dump(2) << '\n'; }

    const std::vector<std::string>& names() const { return names_; }
    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    std::vector<std::string> names_;
};

void dump_state(Outputs& out, const std::string& name, const DickeModel& model, const EdGroundState& gs,
                std::size_t dim_limit) {
    const SymmetricBasis basis(model.n_atoms(), model.atom().levels(), gs.result.n_max_used, dim_limit);
    auto file = out.open(name, true);
    write_state_dump(file, gs.psi, basis);
}

EdGroundState ed_solve(const RunConfig& cfg, const DickeModel& model) {
    if (cfg.ed_n_max) return solve_ground(model, *cfg.ed_n_max, cfg.ed);
    return converge_cutoff(model, cfg.cutoff, cfg.ed);
}

void run_command(const RunConfig& cfg, Outputs& out, int workers) {
    switch (cfg.command) {
        case Command::meanfield_scan: {
            const auto sols = scan_order_parameter(*cfg.model, cfg.axis, cfg.scan_values, cfg.critical.minimize, workers);
            auto file = out.open("meanfield_scan.csv");
            write_scan_csv(file, cfg.scan_values, sols);
            break;
        }
        case Command::critical: {
            const auto tp = critical_coupling(*cfg.model, cfg.axis, cfg.bracket_lo, cfg.bracket_hi, cfg.critical);
            out.json_file("critical.json", to_json(tp));
            break;
        }
        case Command::no_go: {
            const bool none = no_go_check(*cfg.model, cfg.axis, cfg.lambda_max, cfg.n_points, cfg.critical.minimize);
            out.json_file("no_go.json", {{"no_transition", none},
                                         {"lambda_max", cfg.lambda_max},
                                         {"points", cfg.n_points},
                                         {"kappa_rule", cfg.axis.kappa_rule == KappaRule::fixed ? "fixed" : "trk-ground"}});
            break;
        }
        case Command::trk_check:
            out.json_file("trk.json", to_json(trk_report(*cfg.model)));
            break;
        case Command::ed_ground: {
            const EdGroundState gs = ed_solve(cfg, *cfg.model);
            {
                auto file = out.open("ed_ground.csv");
                write_ed_csv_header(file, cfg.model->atom().levels());
                write_ed_csv_row(file, *cfg.model, gs.result);
            }
            out.json_file("ed_ground.json", to_json(gs.result));
            if (cfg.dump_state) dump_state(out, "ground_state.bin", *cfg.model, gs, cfg.ed.dim_limit);
            break;
        }
        case Command::ed_nscan: {
            std::vector<EdGroundState> runs(cfg.ed_atoms.size());
            parallel_for(runs.size(), workers,
                         [&](std::size_t i) { runs[i] = ed_solve(cfg, cfg.model->with_atoms(cfg.ed_atoms[i])); });
            {
                auto file = out.open("ed_nscan.csv");
                write_ed_csv_header(file, cfg.model->atom().levels());
                for (std::size_t i = 0; i < runs.size(); ++i)
                    write_ed_csv_row(file, cfg.model->with_atoms(cfg.ed_atoms[i]), runs[i].result);
            }
            const MeanFieldSolution mf = minimize(*cfg.model, cfg.critical.minimize);
            json rows = json::array();
            bool decreasing = true;
            double previous = INFINITY;
            for (const auto& r : runs) {
                const double gap = std::abs(r.result.e0_per_atom - mf.e_star);
                decreasing = decreasing && gap < previous;
                previous = gap;
                rows.push_back({{"N", r.result.n_atoms},
                                {"e0_per_atom", r.result.e0_per_atom},
                                {"gap_to_mean_field", gap},
                                {"photon_density", r.result.photon_density}});
            }
            out.json_file("ed_nscan_summary.json",
                          {{"mean_field", {{"x_star", mf.x_star},
                                           {"e_star", mf.e_star},
                                           {"photon_density", mf.x_star * mf.x_star},
                                           {"occupations", mf.occupations}}},
                           {"runs", std::move(rows)},
                           {"gap_decreasing", decreasing}});
            if (cfg.dump_state)
                for (std::size_t i = 0; i < runs.size(); ++i)
                    dump_state(out, "ground_state_N" + std::to_string(cfg.ed_atoms[i]) + ".bin",
                               cfg.model->with_atoms(cfg.ed_atoms[i]), runs[i], cfg.ed.dim_limit);
            break;
        }
        case Command::cpb_sweet_spot: {
            const CpbSpec& spec = *cfg.cpb;
            out.json_file("cpb_sweet_spot.json", {{"sweet_spot", to_json(verify_sweet_spot_states(spec))},
                                                  {"two_level", to_json(two_level_reduction(spec))}});
            std::vector<CpbSweepRow> rows;
            if (cfg.cpb_ej_values.empty()) {
                rows.push_back(cpb_sweep_row(spec));
            } else {
                for (double ej : cfg.cpb_ej_values)
                    for (double ng : cfg.cpb_ng_values) rows.push_back(cpb_sweep_row(CpbSpec(spec.ec(), ej, ng, spec.n_cut())));
            }
            auto file = out.open("cpb_sweep.csv");
            write_cpb_csv(file, rows);
            break;
        }
    }
}

}  // namespace

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr))
        throw std::runtime_error("SHA-256 failed");
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

std::vector<std::string> run(const RunConfig& config, const fs::path& out_dir, int workers) {
    const auto start = std::chrono::steady_clock::now();
    Outputs out(out_dir);
    run_command(config, out, workers);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json files = json::array();
    for (const auto& name : out.names()) files.push_back({{"file", name}, {"sha256", sha256_file(out_dir / name)}});
    const json manifest{{"artifact", artifact_name},
                        {"version", artifact_version},
                        {"command", to_string(config.command)},
                        {"seed", config.seed},
                        {"seed_defaulted", config.seed_defaulted},
                        {"config", config_to_json(config)},
                        {"workers", workers},
                        {"wall_time_seconds", seconds},
                        {"outputs", std::move(files)}};
    std::ofstream(out_dir / "manifest.json") << manifest.dump(2) << '\n';
    return out.names();
}

int exit_code_for(const std::exception& error) {
    if (dynamic_cast<const ConfigError*>(&error) || dynamic_cast<const UsageError*>(&error)) return exit_config;
    if (dynamic_cast<const ConvergenceError*>(&error)) return exit_convergence;
    if (dynamic_cast<const ResourceError*>(&error)) return exit_resource;
    if (dynamic_cast<const nlohmann::json::exception*>(&error)) return exit_config;
    return exit_failure;
}

void write_error_record(const fs::path& out_dir, const std::exception& error) {
    const int code = exit_code_for(error);
    const char* category = code == exit_config        ? "config"
                           : code == exit_convergence ? "convergence"
                           : code == exit_resource    ? "resource"
                                                      : "internal";
    json record{{"status", "error"}, {"category", category}, {"exit_code", code}, {"message", error.what()}};
    if (const auto* c = dynamic_cast<const ConvergenceError*>(&error)) record["best_residual"] = c->best_residual();
    if (const auto* r = dynamic_cast<const ResourceError*>(&error)) record["e0_trace"] = r->trace();
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    std::ofstream(out_dir / "error.json") << record.dump(2) << '\n';
}

}  // namespace dicke
