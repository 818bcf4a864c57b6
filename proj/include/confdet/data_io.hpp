#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "confdet/dataset.hpp"

namespace confdet {

/// Reads the dataset CSV (header env,t,y[,x1...xp]). Column kinds are
/// inferred: binary iff all values lie in {0,1}. Blocks keep file order
/// within an environment and first-appearance order across environments.
MultiEnvDataset load_multi_env_csv(const std::string& path);
MultiEnvDataset parse_multi_env_csv(const std::string& content);

std::string multi_env_csv_string(const MultiEnvDataset& ds);
void write_multi_env_csv(const MultiEnvDataset& ds, const std::string& path);

/// Covariate table with environment labels: header env,<name1>,...,<nameM>.
struct CovariateTable {
    std::vector<std::string> column_names;       // covariate names, env excluded
    std::vector<std::string> env_ids;            // one per row
    std::vector<std::vector<double>> columns;    // column-major values

    int n_rows() const { return static_cast<int>(env_ids.size()); }
    int n_cols() const { return static_cast<int>(column_names.size()); }
    int n_envs() const;
    void validate() const;

    /// Drops columns with variance <= min_variance and, optionally, binary
    /// columns (values within {0,1}); the Twins-style filter.
    CovariateTable filtered(double min_variance, bool drop_binary) const;
};

CovariateTable load_covariate_csv(const std::string& path);
CovariateTable parse_covariate_csv(const std::string& content);
std::string covariate_csv_string(const CovariateTable& table);

/// Synthetic covariate table whose per-environment location/scale shifts
/// mimic real-world covariate drift; used when no real table is supplied.
CovariateTable make_demo_covariates(int n_envs, int rows_per_env, int n_cols,
                                    std::uint64_t seed);

/// The affine scaling used before the semi-synthetic structural equations:
/// 5 * (x - mean) / (max - min), statistics over all environments.
std::vector<double> scale_covariate(const std::vector<double>& column);

enum class BasisFn { Tanh, Identity, Square };
const char* to_string(BasisFn f);
double apply_basis(BasisFn f, double x);

struct SemiSynthSpec {
    int p = 1;           // covariates drawn into the SCM
    int n_observed = 0;  // how many of the p are exported as x columns
    double lambda = 1.0; // multiplies outcome coefficients of unobserved covariates
    std::uint64_t seed = 0;
    double coef_lo = 1.0, coef_hi = 5.0;   // alpha_d, beta_d ~ Unif
    double delta_lo = 1.0, delta_hi = 2.0; // treatment effect ~ Unif
    double noise_sd = 0.5;                 // eps_T, eps_Y ~ Normal(0, 1/4)
    std::vector<BasisFn> basis = {BasisFn::Tanh, BasisFn::Identity, BasisFn::Square};

    void validate(int available_columns) const;
};

struct GenerationTrace {
    std::vector<std::string> covariates;  // drawn names, draw order
    std::vector<double> alphas;
    std::vector<double> betas;            // base values; lambda applies to unobserved ones
    std::vector<BasisFn> funcs_f;
    std::vector<BasisFn> funcs_g;
    double delta = 0;
    double lambda = 0;
    std::vector<std::string> observed;    // names exported as x columns
    std::uint64_t seed = 0;
    std::vector<double> scale_mean;       // per drawn covariate, for replay
    std::vector<double> scale_range;
};

std::string trace_to_json(const GenerationTrace& trace);

/// T = sum alpha_d f_d(X_scaled) + eps_T, Y = sum beta_d g_d(X_scaled) +
/// delta T + eps_Y; the first n_observed drawn covariates are exported, the
/// rest act as hidden confounders with their outcome coefficients scaled by
/// lambda. Deterministic given (table, spec).
std::pair<MultiEnvDataset, GenerationTrace> generate_semi_synthetic(const CovariateTable& table,
                                                                    const SemiSynthSpec& spec);

/// Average over environments of (OLS coefficient of T in Y ~ 1 + T + X_obs)
/// minus the true delta; environments with too few rows are skipped.
double estimate_env_ate_bias(const MultiEnvDataset& data, const GenerationTrace& trace);

}  // namespace confdet
