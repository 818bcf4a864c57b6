#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "confdet/data_io.hpp"
#include "confdet/detector.hpp"
#include "confdet/scm.hpp"

namespace confdet {

enum class SweepKind {
    ConfoundingGrid,   // confounder strength x environment count, binary model
    EnvSampleGrid,     // environments x samples per environment at fixed lambda
    JciComparison,     // outcome-mechanism drift axis, detector vs jci baseline
    FaithfulnessGrid,  // mechanism-sd grid around the faithfulness violation locus
    SemiSynthGrid      // confounding strength x adjusted covariates on a table
};

const char* to_string(SweepKind k);
SweepKind sweep_kind_from_string(const std::string& name);

struct SweepConfig {
    SweepKind kind = SweepKind::ConfoundingGrid;
    int repetitions = 100;
    double alpha = 0.05;
    int k_min = 25;
    std::uint64_t seed = 0;
    int workers = 1;
    std::optional<CiTestKind> test;  // defaulted per kind when unset
    std::optional<int> max_rounds;
    int n_perm = 199;
    // Wall time is measurement metadata, not a function of the seed; disable
    // it (writing 0) when byte-identical artifacts are required.
    bool record_wall_time = true;

    // Binary/Gaussian grid axes; empty axes get per-kind desk-scale defaults.
    std::vector<double> lambdas;
    std::vector<int> n_envs;
    std::vector<int> n_per_env;
    std::vector<double> sigma_theta_y_values;
    std::vector<double> sigma_theta_t_values;
    std::vector<double> sigma_theta_u_values;

    bool gauss_model = false;  // jci-comparison on the linear-Gaussian generator
    GaussScmSpec gauss;        // base parameters for Gaussian kinds
    BinaryScmSpec binary;      // base parameters for binary kinds

    // Semi-synthetic inputs.
    std::string covariate_csv;  // empty -> deterministic demo table
    int demo_envs = 150, demo_rows = 110, demo_cols = 6;
    int semi_p = 5;
    std::vector<int> n_observed_values;
    double min_variance = 0.0;
    bool drop_binary = false;

    void apply_kind_defaults();
};

struct TidyRow {
    int cell = 0;
    int rep = 0;
    std::uint64_t seed = 0;
    std::string method;  // "detect" or "jci"
    double global_p = 1.0;
    double fisher_z = 0.0;
    bool rejected = false;
    int rounds_used = 0;
    double ate_bias = 0.0;  // semi-synth only
    double wall_ms = 0.0;
};

struct SweepResult {
    SweepKind kind = SweepKind::ConfoundingGrid;
    double alpha = 0.05;
    std::vector<std::string> param_names;
    std::vector<std::vector<double>> cell_params;  // one vector per cell
    std::vector<TidyRow> rows;
    bool has_bias_column = false;
};

/// Executes the grid. Every (cell, rep) owns a seed derived from
/// (master seed, cell, rep) so single rows can be reproduced in isolation.
/// Rows are computed by a worker pool but stored and streamed in
/// deterministic cell-major order; when `tidy` is given, complete rows are
/// flushed as soon as their prefix is done, so an interrupted run leaves a
/// valid truncated CSV.
SweepResult run_sweep(const SweepConfig& config, std::ostream* tidy = nullptr);

std::string tidy_csv_header(const SweepResult& r);
std::string tidy_csv_row(const SweepResult& r, const TidyRow& row);
std::string tidy_csv(const SweepResult& r);

/// Per-cell aggregation: detection rate, binomial SE, mean Fisher statistic.
std::string summary_csv(const SweepResult& r);

}  // namespace confdet
