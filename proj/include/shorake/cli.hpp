#ifndef SHORAKE_CLI_HPP
#define SHORAKE_CLI_HPP

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "shorake/pdp.hpp"
#include "shorake/types.hpp"

namespace shorake::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 success, 1 validation deviation, 2 bad config or usage,
/// 3 singular profile, 4 quadrature non-convergence.
enum ExitCode : int {
    exit_ok = 0,
    exit_validation_failed = 1,
    exit_config_error = 2,
    exit_singularity = 3,
    exit_non_convergence = 4,
};

class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& file, int line, const std::string& message)
        : std::runtime_error(line > 0 ? file + ":" + std::to_string(line) + ": " + message
                                      : file + ": " + message) {}
};

/// Flat key-value config: dotted section keys, one `key = value` per line,
/// '#' comments. Retains line numbers for precise error messages.
struct ParsedConfig {
    std::string path;
    std::vector<std::string> raw_lines;
    std::map<std::string, std::pair<std::string, int>> entries;
};

ParsedConfig parse_config_file(const std::string& path);

struct RunConfig {
    ShoConfig sho;
    std::vector<pdp::PdpSpec> pdp_specs;  // one per base station
    std::vector<BranchProfile> profiles;  // jitter already applied
    double jitter_rel_eps = 1e-9;
    std::vector<double> grid_db;
    std::vector<double> grid_linear;
    std::uint64_t mc_samples = 1'000'000;
    std::uint64_t mc_seed = 1;
    QuadratureSettings quadrature;
    std::string out_csv;

    int stats_bs = 2;
    std::vector<std::pair<double, double>> joint_points;
    double joint_bin = 0.2;
};

RunConfig load_run_config(const ParsedConfig& parsed);

/// Number formatting shared by every CSV writer: 12 significant digits.
std::string format_number(double v);

int worker_count();

/// Entry point behind the binary; also callable in-process from tests.
/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shorake::cli

#endif
