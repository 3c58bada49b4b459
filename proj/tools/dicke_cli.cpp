// Command-line front end: one declarative JSON run config per invocation.
//
//   dicke-cli --config run.json [--output DIR] [--seed N] [-v]
//
// Worker threads for sweeps come from DICKE_WORKERS (default: all cores).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dicke/config.hpp"
#include "dicke/errors.hpp"
#include "dicke/parallel.hpp"
#include "dicke/runner.hpp"
#include "json.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generalized Dicke model solvers: mean field, exact diagonalization, Cooper pair box"};
    std::string config_path;
    std::optional<std::string> output_dir;
    std::optional<std::uint64_t> seed;
    bool verbose = false;
    app.add_option("-c,--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    app.add_option("-o,--output", output_dir, "Output directory (overrides the config)");
    app.add_option("-s,--seed", seed, "Seed override");
    app.add_flag("-v,--verbose", verbose, "Print the written files");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : dicke::exit_config;
    }

    std::string out_dir = output_dir.value_or("results");
    try {
        std::ifstream in(config_path);
        nlohmann::json doc = nlohmann::json::parse(in);
        if (seed && doc.is_object()) doc["seed"] = *seed;
        if (output_dir && doc.is_object()) doc["output"] = *output_dir;
        const dicke::RunConfig cfg = dicke::parse_config(doc);
        out_dir = cfg.output;

        const int workers = dicke::worker_count();
        const auto files = dicke::run(cfg, out_dir, workers);
        if (verbose)
            for (const auto& f : files) std::cout << out_dir << "/" << f << '\n';
        return dicke::exit_ok;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        dicke::write_error_record(out_dir, e);
        return dicke::exit_code_for(e);
    }
}
