#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "confdet/dataset.hpp"

namespace confdet {

/// Binary-logistic generator: U ~ Normal(theta_U, 1),
/// T ~ Ber(sigm(U + theta_T)), Y ~ Ber(sigm(lambda*U + T + theta_Y)),
/// theta_V ~ Normal(0, sigma_theta_V^2) drawn once per environment.
struct BinaryScmSpec {
    double lambda = 0.0;
    double sigma_theta_t = 1.0;
    double sigma_theta_y = 1.0;
    double sigma_theta_u = 1.0;

    void validate() const;
};

/// Linear-Gaussian generator:
/// U = theta_U + eps_U, T = gamma*U + theta_T + eps_T,
/// Y = lambda*U + beta*T + theta_Y + eps_Y.
struct GaussScmSpec {
    double beta = 1.0;
    double gamma = 1.0;
    double lambda = 1.0;
    double sigma_t = 1.0;
    double sigma_y = 1.0;
    double sigma_u = 1.0;
    double sigma_theta_t = 1.0;
    double sigma_theta_y = 1.0;
    double sigma_theta_u = 1.0;

    void validate() const;
};

/// Per-environment ground truth, exposed only through the *_debug samplers so
/// no detector path can read it by accident.
struct ScmGroundTruth {
    std::vector<double> theta_t, theta_y, theta_u;   // one per environment
    std::vector<std::vector<double>> u;              // hidden confounder values
};

/// Environment k draws from a stream derived from (seed, k), so extending K
/// leaves earlier environments bit-identical.
MultiEnvDataset sample_binary_scm(const BinaryScmSpec& spec, int n_envs, int n_per_env,
                                  std::uint64_t seed);
MultiEnvDataset sample_binary_scm_debug(const BinaryScmSpec& spec, int n_envs, int n_per_env,
                                        std::uint64_t seed, ScmGroundTruth& truth);

/// `degenerate` names mechanisms (e.g. "Theta_U") whose sigma is forced to 0.
MultiEnvDataset sample_gauss_scm(const GaussScmSpec& spec, int n_envs, int n_per_env,
                                 std::uint64_t seed, const std::set<std::string>& degenerate = {});
MultiEnvDataset sample_gauss_scm_debug(const GaussScmSpec& spec, int n_envs, int n_per_env,
                                       std::uint64_t seed, const std::set<std::string>& degenerate,
                                       ScmGroundTruth& truth);

/// Closed-form cross-observation moments of the linear-Gaussian model,
/// exactly as the derivation prints them.
struct CrossMoments {
    double cov_tj_yi = 0;
    double cov_tj_ti = 0;
    double cov_ti_yi = 0;
    double var_t = 0;
    double var_y = 0;
};

CrossMoments analytic_cross_covariances(const GaussScmSpec& spec);

/// rho_{T_j, Y_i . T_i} evaluated from the closed-form moments. The numerator
/// is proportional to gamma*lambda*(sigma_theta_u^2 sigma_t^2 -
/// sigma_u^2 sigma_theta_t^2), so it vanishes exactly on the faithfulness
/// locus and whenever gamma*lambda = 0.
double analytic_partial_correlation(const GaussScmSpec& spec);

enum class AsymptoteAxis { Gamma, Lambda };

/// analytic_partial_correlation with the chosen coefficient replaced by
/// +magnitude; probes the large-effect-size behavior (gamma^-3 decay along
/// gamma, convergence to a constant along lambda).
double partial_correlation_asymptote(const GaussScmSpec& spec, AsymptoteAxis axis,
                                     double magnitude);

/// Bias of the unadjusted regression slope in the large-confounder regime:
/// E[Y|do(T)] - E[Y|T] = -(lambda/gamma) T.
double omitted_variable_bias(const GaussScmSpec& spec);

/// The sigma_theta_u at which the population partial correlation vanishes
/// despite confounding: (sigma_u / sigma_t) * sigma_theta_t.
double faithfulness_locus(double sigma_u, double sigma_t, double sigma_theta_t);

}  // namespace confdet
