#pragma once

#include "icdof/channel.hpp"
#include "icdof/distribution.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace icdof {

/// Config-file or bad-input problem; the message names the offending
/// field or line.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Caps {
    std::uint64_t values = 10'000'000;    // codebook / uniform-sum loop cap
    std::uint64_t pair_ops = 20'000'000;  // injectivity work cap
    std::uint64_t convolution = 2'000'000; // convolution atom cap
};

struct SearchBounds {
    int deg_bound = 3;
    std::uint64_t coeff_bound = 16;
};

struct AnalysisConfig {
    std::vector<std::uint64_t> radicands = {2, 3, 5};
    std::optional<ChannelMatrix> channel;
    std::uint64_t N = 3;
    int d_max = 6;
    Caps caps;
    SearchBounds search;
    std::vector<double> epsilons;              // balance-report tolerances
    std::vector<std::uint64_t> grid_N = {2, 3, 4}; // injectivity grid
    std::vector<int> grid_d = {0, 1, 2};

    // For the entropy command: sum of coefficients[i] * distributions[i].
    std::vector<ExactScalar> coefficients;
    std::vector<DiscreteDistribution> distributions;
};

/// Reads a JSON config; scalars use the exact text syntax ("3/2*sqrt(2)").
/// Throws ConfigError naming the bad field.
AnalysisConfig load_config(const std::string& path);
AnalysisConfig parse_config(const std::string& text, const std::string& source_name);

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;  // an inequality oracle failed
inline constexpr int kExitConfig = 2;     // malformed config or invalid matrix
inline constexpr int kExitTruncated = 3;  // resource caps cut the analysis short

int cmd_analyze(const AnalysisConfig& config, const std::string& out_dir);
int cmd_codebook(const AnalysisConfig& config, const std::string& out_dir);
int cmd_entropy(const AnalysisConfig& config, const std::string& out_dir);
int cmd_check_inequalities(std::uint64_t seed, std::uint64_t cases, const std::string& out_dir);
int cmd_classify3(const AnalysisConfig& config, const std::string& out_dir);

/// CLI entry point: analyze | codebook | entropy | check-inequalities |
/// classify3, with --config, --out, --seed, --cases, --cap-values.
int run_cli(int argc, const char* const* argv);

} // namespace icdof
