#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "latkern/errors.hpp"
#include "latkern/runner.hpp"
#include "latkern/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"lattice kernels of diffusions joined with path functionals"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "execute the job described by a config file");
    std::string config_path;
    std::string output_override;
    run_cmd->add_option("config", config_path, "path to the run configuration")->required();
    run_cmd->add_option("-o,--output", output_override, "override the output directory");

    auto* validate_cmd = app.add_subcommand("validate", "run the built-in invariant suite");
    std::string validate_output = "latkern_out";
    validate_cmd->add_option("-o,--output", validate_output, "output directory for the summary");

    auto* version_cmd = app.add_subcommand("version", "print name and version");

    CLI11_PARSE(app, argc, argv);

    try {
        if (version_cmd->parsed()) {
            std::cout << latkern::kToolName << " " << latkern::kToolVersion << "\n";
            return 0;
        }
        if (run_cmd->parsed()) {
            latkern::RunConfig config =
                latkern::build_run_config(latkern::parse_config_file(config_path));
            if (!output_override.empty())
                config.output_dir = output_override;
            const int code = latkern::run_job(config);
            if (code == 0)
                std::cout << "ok: artifacts written to " << config.output_dir << "\n";
            return code;
        }
        // validate
        latkern::RunConfig config;
        config.job = "validate";
        config.output_dir = validate_output;
        return latkern::run_job(config);
    } catch (const latkern::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const latkern::GuardError& e) {
        std::cerr << "numerical guard: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
