#include "confdet/detector.hpp"

#include <algorithm>
#include <cmath>

#include "confdet/errors.hpp"
#include "confdet/rng.hpp"
#include "confdet/stats.hpp"

namespace confdet {

int MultiEnvDataset::max_obs() const {
    int m = 0;
    for (const auto& e : envs) m = std::max(m, e.n_obs());
    return m;
}

void MultiEnvDataset::validate() const {
    std::vector<std::string> ids;
    for (const auto& e : envs) {
        if (e.n_obs() < 1) throw DataError("environment '" + e.env_id + "' is empty");
        if (e.y.size() != e.t.size())
            throw DataError("environment '" + e.env_id + "' has mismatched t/y lengths");
        if (static_cast<int>(e.x_cols.size()) != n_covariates())
            throw DataError("environment '" + e.env_id + "' has inconsistent covariate count");
        for (const auto& col : e.x_cols)
            if (col.size() != e.t.size())
                throw DataError("environment '" + e.env_id + "' has mismatched covariate length");
        ids.push_back(e.env_id);
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw DataError("duplicate environment id");
}

std::vector<int> sorted_env_indices(const MultiEnvDataset& ds) {
    bool all_numeric = true;
    std::vector<long long> nums(ds.envs.size(), 0);
    for (std::size_t i = 0; i < ds.envs.size(); ++i) {
        const auto& id = ds.envs[i].env_id;
        try {
            std::size_t pos = 0;
            nums[i] = std::stoll(id, &pos);
            if (pos != id.size()) all_numeric = false;
        } catch (...) {
            all_numeric = false;
        }
        if (!all_numeric) break;
    }
    std::vector<int> idx(ds.envs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    if (all_numeric)
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            const auto na = nums[static_cast<std::size_t>(a)];
            const auto nb = nums[static_cast<std::size_t>(b)];
            if (na != nb) return na < nb;
            // "01" and "1" parse equal; keep the order deterministic anyway.
            return ds.envs[static_cast<std::size_t>(a)].env_id <
                   ds.envs[static_cast<std::size_t>(b)].env_id;
        });
    else
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            return ds.envs[static_cast<std::size_t>(a)].env_id <
                   ds.envs[static_cast<std::size_t>(b)].env_id;
        });
    return idx;
}

const char* to_string(CiTestKind k) {
    switch (k) {
        case CiTestKind::GTest: return "g_test";
        case CiTestKind::PartialCorr: return "partial_corr";
        case CiTestKind::Permutation: return "permutation";
        default: return "kci";
    }
}

CiTestKind ci_test_from_string(const std::string& name) {
    if (name == "g_test") return CiTestKind::GTest;
    if (name == "partial_corr") return CiTestKind::PartialCorr;
    if (name == "permutation") return CiTestKind::Permutation;
    if (name == "kci") return CiTestKind::Kci;
    throw UsageError("unknown CI test: " + name);
}

const char* to_string(TheoremMode m) {
    return m == TheoremMode::WithCovariates ? "covariates" : "two-variable";
}

TheoremMode theorem_mode_from_string(const std::string& name) {
    if (name == "covariates") return TheoremMode::WithCovariates;
    if (name == "two-variable") return TheoremMode::TwoVariable;
    throw UsageError("unknown theorem mode: " + name);
}

void DetectorConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must be in (0, 1)");
    if (k_min < 1) throw UsageError("k_min must be positive");
    if (max_rounds && *max_rounds < 1) throw UsageError("max_rounds must be positive");
    if (test == CiTestKind::Permutation && n_perm < 100)
        throw UsageError("permutation n_perm must be >= 100");
}

std::pair<double, double> fisher_combine(const std::vector<double>& p_values) {
    if (p_values.empty()) throw UsageError("fisher_combine: empty p-value list");
    double z = 0.0;
    for (double p : p_values) {
        const double clamped = std::clamp(p, 1e-300, 1.0);
        z += -2.0 * std::log(clamped);
    }
    z = std::max(0.0, z);
    const double global_p = chi2_survival(z, 2 * static_cast<int>(p_values.size()));
    return {z, global_p};
}

std::vector<PairedRound> build_rounds(const MultiEnvDataset& data, int k_min,
                                      std::optional<int> max_rounds) {
    data.validate();
    if (k_min < 1) throw UsageError("k_min must be positive");
    const auto order = sorted_env_indices(data);
    const int l_cap = (data.max_obs() + 1) / 2;  // ceil(max N_k / 2)

    std::vector<PairedRound> rounds;
    for (int i = 1; i <= l_cap; ++i) {
        if (max_rounds && static_cast<int>(rounds.size()) >= *max_rounds) break;
        PairedRound round;
        round.index = i;
        round.obs_first = 2 * i - 2;
        round.obs_second = 2 * i - 1;
        for (int env : order)
            if (data.envs[static_cast<std::size_t>(env)].n_obs() >= 2 * i)
                round.env_indices.push_back(env);
        if (static_cast<int>(round.env_indices.size()) < k_min) break;
        rounds.push_back(std::move(round));
    }
    if (rounds.empty())
        throw DataError("insufficient data: no round reaches k_min=" + std::to_string(k_min) +
                        " environments with enough observations");
    return rounds;
}

namespace {

void append_column(SampleMatrix& m, const std::string& name, ColumnKind kind,
                   std::vector<double> values) {
    if (kind == ColumnKind::Binary)
        m.add_binary(name, std::move(values));
    else
        m.add_continuous(name, std::move(values));
}

CiTestResult run_ci_test(const SampleMatrix& m, const std::string& a, const std::string& b,
                         const std::vector<std::string>& cond, const DetectorConfig& cfg,
                         std::uint64_t round_seed) {
    switch (cfg.test) {
        case CiTestKind::GTest: return g_test_ci(m, a, b, cond);
        case CiTestKind::PartialCorr: return partial_correlation_test(m, a, b, cond);
        case CiTestKind::Permutation:
            return permutation_ci_test(m, a, b, cond, cfg.n_perm, round_seed);
        default: return kernel_ci_test(m, a, b, cond, cfg.kci);
    }
}

}  // namespace

DetectionReport detect(const MultiEnvDataset& data, const DetectorConfig& config) {
    config.validate();
    data.validate();
    if (data.n_envs() < 2) throw DataError("insufficient data: need at least 2 environments");
    const auto rounds = build_rounds(data, config.k_min, config.max_rounds);

    const bool need_binary =
        config.test == CiTestKind::GTest || config.test == CiTestKind::Permutation;
    if (need_binary && (data.t_kind == ColumnKind::Continuous))
        throw UsageError(std::string(to_string(config.test)) +
                         " requires a binary treatment column");
    if (config.test == CiTestKind::GTest && data.y_kind == ColumnKind::Continuous)
        throw UsageError("g_test requires a binary outcome column");
    if (need_binary)
        for (auto k : data.x_kinds)
            if (k == ColumnKind::Continuous)
                throw UsageError(std::string(to_string(config.test)) +
                                 " cannot condition on continuous covariates");
    if (config.test == CiTestKind::PartialCorr) {
        if (data.t_kind != ColumnKind::Continuous || data.y_kind != ColumnKind::Continuous)
            throw UsageError("partial_corr requires continuous treatment and outcome");
        for (auto k : data.x_kinds)
            if (k != ColumnKind::Continuous)
                throw UsageError("partial_corr requires continuous covariates");
    }

    DetectionReport report;
    report.alpha = config.alpha;
    report.test_name = to_string(config.test);

    Rng seed_root(config.seed);
    for (const auto& round : rounds) {
        const std::size_t n = round.env_indices.size();
        std::vector<double> tj(n), yi(n), ti(n), yj(n);
        std::vector<std::vector<double>> xi(data.x_kinds.size(), std::vector<double>(n));
        std::vector<std::vector<double>> xj(data.x_kinds.size(), std::vector<double>(n));
        for (std::size_t r = 0; r < n; ++r) {
            const auto& env = data.envs[static_cast<std::size_t>(round.env_indices[r])];
            const auto first = static_cast<std::size_t>(round.obs_first);
            const auto second = static_cast<std::size_t>(round.obs_second);
            tj[r] = env.t[first];
            yj[r] = env.y[first];
            yi[r] = env.y[second];
            ti[r] = env.t[second];
            for (std::size_t c = 0; c < data.x_kinds.size(); ++c) {
                xi[c][r] = env.x_cols[c][second];
                xj[c][r] = env.x_cols[c][first];
            }
        }

        SampleMatrix m;
        append_column(m, "t_j", data.t_kind, std::move(tj));
        append_column(m, "y_i", data.y_kind, std::move(yi));
        append_column(m, "t_i", data.t_kind, std::move(ti));
        append_column(m, "y_j", data.y_kind, std::move(yj));
        for (std::size_t c = 0; c < data.x_kinds.size(); ++c) {
            append_column(m, "x" + std::to_string(c + 1) + "_i", data.x_kinds[c], std::move(xi[c]));
            append_column(m, "x" + std::to_string(c + 1) + "_j", data.x_kinds[c], std::move(xj[c]));
        }

        const std::uint64_t round_seed =
            seed_root.stream({static_cast<std::uint64_t>(round.index)}).next_u64();
        double p = 1.0;
        try {
            if (config.theorem == TheoremMode::WithCovariates) {
                std::vector<std::string> cond = {"t_i"};
                for (std::size_t c = 0; c < data.x_kinds.size(); ++c) {
                    cond.push_back("x" + std::to_string(c + 1) + "_i");
                    cond.push_back("x" + std::to_string(c + 1) + "_j");
                }
                p = run_ci_test(m, "t_j", "y_i", cond, config, round_seed).p_value;
            } else {
                const double p1 =
                    run_ci_test(m, "t_j", "y_i", {"t_i"}, config, round_seed).p_value;
                const double p2 =
                    run_ci_test(m, "t_j", "y_i", {"y_j"}, config, round_seed).p_value;
                // The theorem needs both dependencies, so the round rejects
                // only if both tests do.
                p = std::max(p1, p2);
            }
        } catch (const DataError&) {
            // A round whose assembled columns degenerate (e.g. a constant
            // treatment slice) carries no evidence against the null.
            p = 1.0;
        }
        report.round_p_values.push_back(p);
        report.round_env_counts.push_back(static_cast<int>(n));
    }

    const auto [z, global_p] = fisher_combine(report.round_p_values);
    report.fisher_statistic = z;
    report.global_p = global_p;
    report.rejected = global_p <= config.alpha;
    report.rounds_used = static_cast<int>(report.round_p_values.size());
    return report;
}

CiTestResult jci_baseline(const MultiEnvDataset& data, const DetectorConfig& config) {
    config.validate();
    data.validate();
    if (data.n_envs() < 2) throw UsageError("jci baseline needs at least 2 environments");
    if (config.test == CiTestKind::PartialCorr)
        throw UsageError("jci baseline: the environment label is categorical; partial_corr "
                         "does not apply");

    const auto order = sorted_env_indices(data);
    std::vector<double> y, t, env_code;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        const auto& block = data.envs[static_cast<std::size_t>(order[rank])];
        for (int i = 0; i < block.n_obs(); ++i) {
            y.push_back(block.y[static_cast<std::size_t>(i)]);
            t.push_back(block.t[static_cast<std::size_t>(i)]);
            env_code.push_back(static_cast<double>(rank));
        }
    }

    SampleMatrix m;
    append_column(m, "y", data.y_kind, std::move(y));
    m.add_categorical("env", std::move(env_code), data.n_envs());
    if (config.test == CiTestKind::Kci)
        m.add_continuous("t", std::move(t));
    else
        append_column(m, "t", data.t_kind, std::move(t));

    const std::uint64_t seed = Rng(config.seed).stream({0x6a6369ULL}).next_u64();
    switch (config.test) {
        case CiTestKind::GTest: return g_test_ci(m, "y", "env", {"t"});
        case CiTestKind::Permutation:
            return permutation_ci_test(m, "y", "env", {"t"}, config.n_perm, seed);
        default: return kernel_ci_test(m, "y", "env", {"t"}, config.kci);
    }
}

}  // namespace confdet
