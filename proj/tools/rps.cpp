#include <string>
#include <utility>

#include "CLI11.hpp"
#include "rps/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Radial large and bounded solutions of phi-Laplacian systems"};
    app.require_subcommand(1);

    std::string config;
    const std::pair<const char*, const char*> commands[] = {
        {"solve", "iterate the radial integral equations, write CSV and JSON"},
        {"classify", "evaluate the criteria functionals and classify the instance"},
        {"validate", "check hypotheses, envelopes and oracle instances"},
        {"sweep", "classify over a grid of parameter values"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config, "JSON configuration file")->required();
    }
    CLI11_PARSE(app, argc, argv);

    return rps::run_command(app.get_subcommands().front()->get_name(), config);
}
