#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cursor_sim/config.hpp"
#include "cursor_sim/experiments.hpp"

namespace {

std::string schema_help() {
    std::ostringstream os;
    os << "Experiments and their CSV outputs:\n";
    for (const auto& e : csim::experiment_catalog()) {
        os << "  " << e.name << "\n";
        for (const auto& o : e.outputs) os << "      " << o << "\n";
    }
    return os.str();
}

void print_list() {
    for (const auto& e : csim::experiment_catalog()) {
        std::cout << e.name << "\t" << e.description;
        if (!e.required.empty()) {
            std::cout << "\t(requires";
            for (const auto& r : e.required) std::cout << " " << r;
            std::cout << ")";
        }
        std::cout << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cursor-clocked quantum machine simulator"};
    app.footer(schema_help());
    app.require_subcommand(0, 1);
    bool list_flag = false;
    app.add_flag("--list", list_flag, "List experiments");

    auto* run = app.add_subcommand("run", "Run an experiment from a config file");
    std::string config_path;
    std::string out_dir;
    bool svg = false;
    std::uint64_t seed = 0;
    run->add_option("config", config_path, "TOML config")->required()->check(CLI::ExistingFile);
    auto* out_opt = run->add_option("--out", out_dir, "Output directory");
    run->add_flag("--svg", svg, "Also write SVG plots");
    auto* seed_opt = run->add_option("--seed", seed, "RNG seed (overrides the config)");

    auto* list = app.add_subcommand("list", "List experiments");

    auto* validate = app.add_subcommand("validate", "Check a config file without running it");
    std::string validate_path;
    validate->add_option("config", validate_path, "TOML config")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_flag || list->parsed()) {
            print_list();
            return 0;
        }
        if (validate->parsed()) {
            const auto cfg = csim::load_config(validate_path);
            std::cout << validate_path << ": ok (" << cfg.name << ")\n";
            return 0;
        }
        if (run->parsed()) {
            const auto cfg = csim::load_config(config_path);
            csim::RunOptions opts;
            opts.config_path = config_path;
            if (*out_opt) opts.out_dir = out_dir;
            if (svg) opts.svg = true;
            if (*seed_opt) opts.seed = seed;
            for (const auto& p : csim::run_experiment(cfg, opts)) std::cout << p << "\n";
            return 0;
        }
        std::cout << app.help();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "cursor-sim: " << e.what() << "\n";
        return 1;
    }
}
