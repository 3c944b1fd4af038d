#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "entropic/experiment.hpp"

using namespace entropic;

int main(int argc, char** argv) {
    CLI::App app{"Schrodinger bridges and entropic interpolations on discrete spaces"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int threads = 1;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* cmd, bool with_run_flags) {
        cmd->add_option("--config", config_path, "experiment config file")->required();
        if (with_run_flags) {
            cmd->add_option("--out", out_dir, "output directory (overrides the config)");
            cmd->add_option("--threads", threads, "sweep workers")->check(CLI::PositiveNumber);
        }
        cmd->add_option("--seed", seed, "seed for randomized diagnostics");
    };

    CLI::App* validate = app.add_subcommand("validate", "check the config without running");
    add_common(validate, false);
    CLI::App* run = app.add_subcommand("run", "run the full experiment");
    add_common(run, true);
    CLI::App* space_check = app.add_subcommand("space-check", "space diagnostics only");
    add_common(space_check, false);

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig config = load_config_file(config_path);

        if (validate->parsed()) {
            auto violations = validate_config(config);
            for (const auto& v : violations) std::cerr << "config error: " << v << '\n';
            if (violations.empty()) std::cout << "config ok\n";
            return violations.empty() ? 0 : 2;
        }

        if (space_check->parsed()) {
            auto violations = validate_config(config);
            if (!violations.empty()) {
                for (const auto& v : violations) std::cerr << "config error: " << v << '\n';
                return 2;
            }
            Space space = build_space(config.space);
            SpaceDiagnostics diag = validate_space(space, seed);
            for (const auto& c : diag.checks)
                std::cout << (c.pass ? "pass" : "FAIL") << "  " << c.name
                          << "  residual=" << format_double(c.residual) << '\n';
            return diag.all_pass() ? 0 : 1;
        }

        RunOptions options;
        options.output_dir_override = out_dir;
        options.threads = threads;
        options.seed = seed;
        return run_experiment(config, options);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
