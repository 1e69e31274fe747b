#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace wavestab::cli {

using nlohmann::json;

// Raised for malformed or incomplete configuration; maps to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// "%.17g"
std::string fmt(double x);

// Each command returns the process exit code: 0 success, 2 diagnostic.
int cmd_portrait(const json& cfg, std::ostream& out);
int cmd_stability(const json& cfg, std::ostream& out);
int cmd_asympt(const json& cfg, std::ostream& out);
int cmd_constants(const json& cfg, std::ostream& out);
int cmd_asymlib_check(const json& cfg, std::ostream& out);
// Appends to out_path, skipping rows already present. threads <= 0 picks a default.
int cmd_sweep(const json& cfg, const std::string& out_path, int threads);

// Loads the config file and dispatches; config problems are reported on err and give 1.
int run(const std::string& subcommand, const std::string& config_path,
        const std::string& out_path, std::ostream& err);

}  // namespace wavestab::cli
