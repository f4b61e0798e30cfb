#pragma once

#include <map>
#include <string>
#include <vector>

#include "latkern/coefficients.hpp"
#include "latkern/errors.hpp"
#include "latkern/lattice.hpp"
#include "latkern/propagation.hpp"

namespace latkern {

/// Flat sectioned key-value file: "[section]" headers, "key = value" lines,
/// '#' comments. Keys are stored as "section.key".
struct ParsedConfig {
    std::map<std::string, std::string> values;
    std::map<std::string, std::size_t> lines;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int_or(const std::string& key, long long fallback) const;
};

ParsedConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
ParsedConfig parse_config_file(const std::string& path);

/// Job description distilled from a parsed config.
struct RunConfig {
    std::string job;
    double half_width = 1.0;
    std::vector<int> levels;
    double t = 0.0;
    CoefficientRecipe recipe;
    FrequencyGrid freqs;
    bool have_freqs = false;
    KernelMethod method;
    std::string output_dir = "latkern_out";
    std::map<std::string, double> tolerances;

    double sup_x0 = 0.0;

    double dsum_period = 0.0;
    long long dsum_periods = 1;
    std::string psi_kind = "displacement"; // displacement | arrival | table
    std::string psi_path;

    std::string convergence_kind = "kernel"; // kernel | euler_gap
    double disc_radius = 2.0;

    bool want_density = false;
    bool density_dual_offsets = true;
    std::vector<double> density_offsets;

    ParsedConfig raw;
};

RunConfig build_run_config(const ParsedConfig& parsed);

/// "1.5", "-2i", "1+0.5i" style scalars for explicit frequency lists.
Complex parse_complex(const std::string& text);

struct CheckResult {
    std::string name;
    bool pass = false;
    double metric = 0.0;
    double tolerance = 0.0;
};

/// Fast self-contained invariant suite run by the validate job.
std::vector<CheckResult> run_validation_suite(const std::map<std::string, double>& overrides);

/// Execute a job; writes artifacts under config.output_dir. Returns the
/// process exit code (0 ok, 1 validation failure). Configuration problems
/// throw ConfigError (exit 2) and numerical guards throw GuardError (exit 3).
int run_job(const RunConfig& config);

} // namespace latkern
