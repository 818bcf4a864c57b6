#include "confdet/scm.hpp"

#include <cmath>

#include "confdet/errors.hpp"
#include "confdet/rng.hpp"
#include "confdet/unroll.hpp"

namespace confdet {

namespace {

double sigm(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::string env_label(int k, int n_envs) {
    // Zero-padded so lexicographic and numeric orderings agree in files.
    int width = 1;
    for (int v = n_envs - 1; v >= 10; v /= 10) ++width;
    std::string s = std::to_string(k);
    return std::string(static_cast<std::size_t>(width) - std::min<std::size_t>(width, s.size()),
                       '0') +
           s;
}

void check_sigma(double v, const char* name) {
    if (v < 0 || !std::isfinite(v)) throw UsageError(std::string(name) + " must be >= 0 and finite");
}

}  // namespace

void BinaryScmSpec::validate() const {
    if (!std::isfinite(lambda)) throw UsageError("lambda must be finite");
    check_sigma(sigma_theta_t, "sigma_theta_t");
    check_sigma(sigma_theta_y, "sigma_theta_y");
    check_sigma(sigma_theta_u, "sigma_theta_u");
}

void GaussScmSpec::validate() const {
    for (double v : {beta, gamma, lambda})
        if (!std::isfinite(v)) throw UsageError("beta/gamma/lambda must be finite");
    check_sigma(sigma_t, "sigma_t");
    check_sigma(sigma_y, "sigma_y");
    check_sigma(sigma_u, "sigma_u");
    check_sigma(sigma_theta_t, "sigma_theta_t");
    check_sigma(sigma_theta_y, "sigma_theta_y");
    check_sigma(sigma_theta_u, "sigma_theta_u");
    if (sigma_theta_t == 0 && sigma_theta_u == 0)
        throw UsageError("at least one of sigma_theta_t, sigma_theta_u must be positive "
                         "(environments must differ in P(T|X) or P(U))");
}

MultiEnvDataset sample_binary_scm_debug(const BinaryScmSpec& spec, int n_envs, int n_per_env,
                                        std::uint64_t seed, ScmGroundTruth& truth) {
    spec.validate();
    if (n_envs < 1 || n_per_env < 1) throw UsageError("n_envs and n_per_env must be >= 1");

    MultiEnvDataset ds;
    ds.t_kind = ColumnKind::Binary;
    ds.y_kind = ColumnKind::Binary;
    truth = ScmGroundTruth{};
    Rng root(seed);
    for (int k = 0; k < n_envs; ++k) {
        Rng rng = root.stream({static_cast<std::uint64_t>(k)});
        const double theta_t = rng.normal(0.0, spec.sigma_theta_t);
        const double theta_y = rng.normal(0.0, spec.sigma_theta_y);
        const double theta_u = rng.normal(0.0, spec.sigma_theta_u);
        EnvBlock block;
        block.env_id = env_label(k, n_envs);
        std::vector<double> us;
        for (int i = 0; i < n_per_env; ++i) {
            const double u = rng.normal(theta_u, 1.0);
            const double t = rng.bernoulli(sigm(u + theta_t)) ? 1.0 : 0.0;
            const double y = rng.bernoulli(sigm(spec.lambda * u + t + theta_y)) ? 1.0 : 0.0;
            block.t.push_back(t);
            block.y.push_back(y);
            us.push_back(u);
        }
        ds.envs.push_back(std::move(block));
        truth.theta_t.push_back(theta_t);
        truth.theta_y.push_back(theta_y);
        truth.theta_u.push_back(theta_u);
        truth.u.push_back(std::move(us));
    }
    return ds;
}

MultiEnvDataset sample_binary_scm(const BinaryScmSpec& spec, int n_envs, int n_per_env,
                                  std::uint64_t seed) {
    ScmGroundTruth truth;
    return sample_binary_scm_debug(spec, n_envs, n_per_env, seed, truth);
}

MultiEnvDataset sample_gauss_scm_debug(const GaussScmSpec& spec, int n_envs, int n_per_env,
                                       std::uint64_t seed, const std::set<std::string>& degenerate,
                                       ScmGroundTruth& truth) {
    spec.validate();
    if (n_envs < 1 || n_per_env < 1) throw UsageError("n_envs and n_per_env must be >= 1");
    for (const auto& name : degenerate)
        if (name != mechanism_name("T") && name != mechanism_name("Y") &&
            name != mechanism_name("U"))
            throw UsageError("unknown mechanism in degenerate set: " + name);

    const double s_tt = degenerate.count(mechanism_name("T")) ? 0.0 : spec.sigma_theta_t;
    const double s_ty = degenerate.count(mechanism_name("Y")) ? 0.0 : spec.sigma_theta_y;
    const double s_tu = degenerate.count(mechanism_name("U")) ? 0.0 : spec.sigma_theta_u;

    MultiEnvDataset ds;
    ds.t_kind = ColumnKind::Continuous;
    ds.y_kind = ColumnKind::Continuous;
    truth = ScmGroundTruth{};
    Rng root(seed);
    for (int k = 0; k < n_envs; ++k) {
        Rng rng = root.stream({static_cast<std::uint64_t>(k)});
        const double theta_t = rng.normal(0.0, s_tt);
        const double theta_y = rng.normal(0.0, s_ty);
        const double theta_u = rng.normal(0.0, s_tu);
        EnvBlock block;
        block.env_id = env_label(k, n_envs);
        std::vector<double> us;
        for (int i = 0; i < n_per_env; ++i) {
            const double u = theta_u + rng.normal(0.0, spec.sigma_u);
            const double t = spec.gamma * u + theta_t + rng.normal(0.0, spec.sigma_t);
            const double y =
                spec.lambda * u + spec.beta * t + theta_y + rng.normal(0.0, spec.sigma_y);
            block.t.push_back(t);
            block.y.push_back(y);
            us.push_back(u);
        }
        ds.envs.push_back(std::move(block));
        truth.theta_t.push_back(theta_t);
        truth.theta_y.push_back(theta_y);
        truth.theta_u.push_back(theta_u);
        truth.u.push_back(std::move(us));
    }
    return ds;
}

MultiEnvDataset sample_gauss_scm(const GaussScmSpec& spec, int n_envs, int n_per_env,
                                 std::uint64_t seed, const std::set<std::string>& degenerate) {
    ScmGroundTruth truth;
    return sample_gauss_scm_debug(spec, n_envs, n_per_env, seed, degenerate, truth);
}

CrossMoments analytic_cross_covariances(const GaussScmSpec& spec) {
    const double a = spec.sigma_theta_u * spec.sigma_theta_u;  // E[Theta_U^2]
    const double u = spec.sigma_u * spec.sigma_u;              // E[eps_U^2]
    const double t = spec.sigma_theta_t * spec.sigma_theta_t;  // E[Theta_T^2]
    const double s = spec.sigma_t * spec.sigma_t;              // E[eps_T^2]
    const double b = spec.beta;
    const double g = spec.gamma;
    const double l = spec.lambda;

    CrossMoments m;
    m.cov_tj_yi = (g * l + b * g * g) * a + b * t;
    m.cov_tj_ti = g * g * a + t;
    m.cov_ti_yi = (g * l + b * g * g) * (a + u) + b * (t + s);
    m.var_t = g * g * (a + u) + t + s;
    m.var_y = 2.0 * (l * l + b * b * g * g) * (a + u) + b * b * (t + s) +
              spec.sigma_theta_y * spec.sigma_theta_y + spec.sigma_y * spec.sigma_y;
    return m;
}

double analytic_partial_correlation(const GaussScmSpec& spec) {
    const auto m = analytic_cross_covariances(spec);
    if (m.var_t <= 0) throw NumericalError("partial correlation undefined: Var(T) vanishes");
    if (m.var_y <= 0) throw NumericalError("partial correlation undefined: Var(Y) vanishes");
    const double rho_tj_yi = m.cov_tj_yi / std::sqrt(m.var_t * m.var_y);
    const double rho_tj_ti = m.cov_tj_ti / m.var_t;
    const double rho_ti_yi = m.cov_ti_yi / std::sqrt(m.var_t * m.var_y);
    const double f1 = 1.0 - rho_tj_ti * rho_tj_ti;
    const double f2 = 1.0 - rho_ti_yi * rho_ti_yi;
    if (f1 <= 0)
        throw NumericalError("partial correlation undefined: 1 - rho(T_j,T_i)^2 vanishes");
    if (f2 <= 0)
        throw NumericalError("partial correlation undefined: 1 - rho(T_i,Y_i)^2 vanishes");
    return (rho_tj_yi - rho_tj_ti * rho_ti_yi) / (std::sqrt(f1) * std::sqrt(f2));
}

double partial_correlation_asymptote(const GaussScmSpec& spec, AsymptoteAxis axis,
                                     double magnitude) {
    if (!(magnitude > 0)) throw UsageError("magnitude must be positive");
    GaussScmSpec probe = spec;
    if (axis == AsymptoteAxis::Gamma)
        probe.gamma = magnitude;
    else
        probe.lambda = magnitude;
    return analytic_partial_correlation(probe);
}

double omitted_variable_bias(const GaussScmSpec& spec) {
    if (spec.gamma == 0)
        throw NumericalError("omitted-variable bias undefined: gamma = 0 (no confounding "
                             "channel into T)");
    return -spec.lambda / spec.gamma;
}

double faithfulness_locus(double sigma_u, double sigma_t, double sigma_theta_t) {
    if (!(sigma_t > 0)) throw NumericalError("faithfulness locus undefined: sigma_t must be > 0");
    if (sigma_u < 0 || sigma_theta_t < 0)
        throw UsageError("sigma_u and sigma_theta_t must be >= 0");
    return sigma_u / sigma_t * sigma_theta_t;
}

}  // namespace confdet
