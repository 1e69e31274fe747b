#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wavestab/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"wavestab: periodic traveling waves, action Hessians and stability"};
    app.require_subcommand(1);
    std::string config, out = "-";
    for (const char* name : {"portrait", "stability", "asympt", "sweep", "constants", "asymlib-check"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "JSON run configuration")->required();
        sub->add_option("--out", out, "output path, - for stdout");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    const std::string sub = app.get_subcommands().front()->get_name();
    return wavestab::cli::run(sub, config, out, std::cerr);
}
