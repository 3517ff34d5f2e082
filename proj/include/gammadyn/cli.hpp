#pragma once

#include <string>

#include "gammadyn/construction.hpp"

namespace gammadyn::cli {

// Stable exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 1;
inline constexpr int kExitCoverable = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitViolation = 4;
inline constexpr int kExitNotCoverable = 10;

struct RunConfig {
    std::string input_path;
    std::string output_path; // empty = stdout
    std::string config_path;
    BuildOptions build;
    // rotation-demo settings, normally supplied through --config
    double bf_theta = 3.8832220774509327; // 2*pi*(sqrt(5)-1)/2
    double bf_eps = 0.1;
    double bf_lambda = 1.0;
    int bf_k0 = 12;
    int bf_gamma_count = 101;
    double bf_gamma_min = 1.0;
    double bf_gamma_max = 2.0;
    std::vector<std::vector<double>> bf_targets; // [re, im] pairs; empty = auto spread
};

/// Applies the JSON config file (when set), leaving CLI-provided overrides
/// to the caller.
void apply_config_file(RunConfig& cfg);

int run_classify(const RunConfig& cfg);
int run_construct(const RunConfig& cfg);
int run_verify(const RunConfig& cfg);
int run_orbit(const RunConfig& cfg);
int run_bf_demo(const RunConfig& cfg);

} // namespace gammadyn::cli
