#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracchs/commands.hpp"

namespace {

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad sweep value '" + item + "'");
        values.push_back(v);
    }
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral-fractional Cahn-Hilliard cross-diffusion simulator"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "integrate one trajectory");
    run->add_option("--config", config_path, "configuration file")->required();

    std::string axis, values;
    auto* sweep = app.add_subcommand("sweep", "convergence sweep over modes, delta or eps");
    sweep->add_option("--config", config_path, "configuration file")->required();
    sweep->add_option("--axis", axis, "modes | delta | eps")->required();
    sweep->add_option("--values", values, "comma-separated parameter levels")->required();

    std::uint64_t seed = 20240917;
    auto* verify = app.add_subcommand("verify", "operator, positivity and potential property suite");
    verify->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? fracchs::exit_ok : fracchs::exit_validation;
    }

    if (*verify) return fracchs::cmd_verify(seed, std::cout);

    fracchs::RunConfig cfg;
    try {
        cfg = fracchs::load_config(config_path);
    } catch (const fracchs::ConfigError& e) {
        std::cerr << config_path << ": " << e.what() << "\n";
        return fracchs::exit_validation;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return fracchs::exit_runtime;
    }

    if (*run) return fracchs::cmd_run(cfg, std::cerr);

    try {
        return fracchs::cmd_sweep(cfg, fracchs::parse_sweep_axis(axis), parse_values(values),
                                  fracchs::thread_budget(), std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "sweep: " << e.what() << "\n";
        return fracchs::exit_validation;
    }
}
