#include "sunburst/experiments.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct CliArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

constexpr const char* kExperiments[] = {"rratio_sweep", "quench_limits",
                                        "coherence_table", "ipr_trace",
                                        "transition_curve"};

int run(const std::string& experiment, const CliArgs& args) {
    sunburst::RunConfig config = sunburst::load_config(args.config_path);
    if (config.experiment.empty()) config.experiment = experiment;
    if (config.experiment != experiment)
        throw std::invalid_argument("config declares experiment '" +
                                    config.experiment + "' but subcommand is '" +
                                    experiment + "'");
    if (args.seed) {
        config.seed = *args.seed;
        config.spec.seed = *args.seed;
        if (config.spec_xxz) config.spec_xxz->seed = *args.seed;
    }
    if (args.out) config.out = *args.out;

    sunburst::run_experiment(config);
    std::cout << "wrote " << config.out << "/manifest.json\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sunburst: exact diagonalization and quench dynamics of a "
                 "transverse-field Ising ring coupled to external qubits"};
    app.require_subcommand(1);

    std::map<std::string, CliArgs> args;
    for (const char* name : kExperiments) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", args[name].config_path, "JSON config file")
            ->required();
        sub->add_option("--seed", args[name].seed, "override the run seed");
        sub->add_option("--out", args[name].out, "override the output directory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string experiment = app.get_subcommands().front()->get_name();
    try {
        return run(experiment, args[experiment]);
    } catch (const std::invalid_argument& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 2;
    } catch (const sunburst::resource_error& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 2;
    } catch (const sunburst::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
