#include "confdet/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "confdet/errors.hpp"
#include "confdet/rng.hpp"

namespace confdet {

namespace {

std::string fmt(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

}  // namespace

const char* to_string(SweepKind k) {
    switch (k) {
        case SweepKind::ConfoundingGrid: return "confounding-grid";
        case SweepKind::EnvSampleGrid: return "env-sample-grid";
        case SweepKind::JciComparison: return "jci-comparison";
        case SweepKind::FaithfulnessGrid: return "faithfulness-grid";
        default: return "semi-synth-grid";
    }
}

SweepKind sweep_kind_from_string(const std::string& name) {
    if (name == "confounding-grid") return SweepKind::ConfoundingGrid;
    if (name == "env-sample-grid") return SweepKind::EnvSampleGrid;
    if (name == "jci-comparison") return SweepKind::JciComparison;
    if (name == "faithfulness-grid") return SweepKind::FaithfulnessGrid;
    if (name == "semi-synth-grid") return SweepKind::SemiSynthGrid;
    throw UsageError("unknown sweep kind: " + name);
}

void SweepConfig::apply_kind_defaults() {
    switch (kind) {
        case SweepKind::ConfoundingGrid:
            if (lambdas.empty()) lambdas = {0, 2, 5, 10};
            if (n_envs.empty()) n_envs = {50, 200, 500};
            if (n_per_env.empty()) n_per_env = {2};
            if (!test) test = CiTestKind::GTest;
            break;
        case SweepKind::EnvSampleGrid:
            if (lambdas.empty()) lambdas = {5};
            if (n_envs.empty()) n_envs = {25, 50, 100};
            if (n_per_env.empty()) n_per_env = {2, 10, 25};
            if (!test) test = CiTestKind::Permutation;
            break;
        case SweepKind::JciComparison:
            if (lambdas.empty()) lambdas = {0};
            if (sigma_theta_y_values.empty()) sigma_theta_y_values = {0, 0.1, 0.25};
            if (n_envs.empty()) n_envs = {500};
            if (n_per_env.empty()) n_per_env = {100};
            if (!test) test = CiTestKind::GTest;
            if (gauss_model && sigma_theta_u_values.empty()) gauss.sigma_theta_u = 10.0;
            break;
        case SweepKind::FaithfulnessGrid:
            if (sigma_theta_t_values.empty()) sigma_theta_t_values = {1.0};
            if (sigma_theta_u_values.empty()) sigma_theta_u_values = {0.5, 1.5, 2.5, 3.5};
            if (n_envs.empty()) n_envs = {1000};
            if (n_per_env.empty()) n_per_env = {2};
            if (!test) test = CiTestKind::PartialCorr;
            gauss.sigma_t = 2.0 / 3.0;
            gauss.sigma_u = 1.0;
            gauss.sigma_y = 1.0;
            gauss.sigma_theta_y = 1.0;
            gauss.beta = gauss.gamma = gauss.lambda = 1.0;
            break;
        case SweepKind::SemiSynthGrid:
            if (lambdas.empty()) lambdas = {0, 1, 2, 3, 4, 5};
            if (n_observed_values.empty()) n_observed_values = {0};
            if (repetitions > 100) repetitions = 100;
            if (!test) test = CiTestKind::Kci;
            if (!max_rounds) max_rounds = 50;
            break;
    }
}

namespace {

struct CellSpec {
    std::vector<double> params;
};

struct SweepPlan {
    std::vector<std::string> param_names;
    std::vector<CellSpec> cells;
    bool with_jci = false;
    bool with_bias = false;
};

SweepPlan make_plan(const SweepConfig& cfg) {
    SweepPlan plan;
    switch (cfg.kind) {
        case SweepKind::ConfoundingGrid:
            plan.param_names = {"lambda", "n_envs", "n_per_env"};
            for (double l : cfg.lambdas)
                for (int k : cfg.n_envs)
                    for (int n : cfg.n_per_env)
                        plan.cells.push_back({{l, static_cast<double>(k), static_cast<double>(n)}});
            break;
        case SweepKind::EnvSampleGrid:
            plan.param_names = {"lambda", "n_envs", "n_per_env"};
            for (double l : cfg.lambdas)
                for (int k : cfg.n_envs)
                    for (int n : cfg.n_per_env)
                        plan.cells.push_back({{l, static_cast<double>(k), static_cast<double>(n)}});
            break;
        case SweepKind::JciComparison:
            plan.param_names = {"lambda", "sigma_theta_y", "n_envs", "n_per_env"};
            plan.with_jci = true;
            for (double l : cfg.lambdas)
                for (double sy : cfg.sigma_theta_y_values)
                    for (int k : cfg.n_envs)
                        for (int n : cfg.n_per_env)
                            plan.cells.push_back(
                                {{l, sy, static_cast<double>(k), static_cast<double>(n)}});
            break;
        case SweepKind::FaithfulnessGrid:
            plan.param_names = {"sigma_theta_t", "sigma_theta_u", "n_envs", "n_per_env"};
            for (double st : cfg.sigma_theta_t_values)
                for (double su : cfg.sigma_theta_u_values)
                    for (int k : cfg.n_envs)
                        for (int n : cfg.n_per_env)
                            plan.cells.push_back(
                                {{st, su, static_cast<double>(k), static_cast<double>(n)}});
            break;
        case SweepKind::SemiSynthGrid:
            plan.param_names = {"lambda", "n_observed", "p"};
            plan.with_bias = true;
            for (double l : cfg.lambdas)
                for (int s : cfg.n_observed_values)
                    plan.cells.push_back(
                        {{l, static_cast<double>(s), static_cast<double>(cfg.semi_p)}});
            break;
    }
    return plan;
}

std::vector<TidyRow> run_task(const SweepConfig& cfg, const SweepPlan& plan,
                              const CovariateTable* table, int cell, int rep) {
    const std::uint64_t seed = Rng(cfg.seed)
                                   .stream({static_cast<std::uint64_t>(cell),
                                            static_cast<std::uint64_t>(rep)})
                                   .next_u64();
    DetectorConfig det;
    det.alpha = cfg.alpha;
    det.k_min = cfg.k_min;
    det.test = *cfg.test;
    det.max_rounds = cfg.max_rounds;
    det.seed = seed;
    det.n_perm = cfg.n_perm;

    const auto& params = plan.cells[static_cast<std::size_t>(cell)].params;
    MultiEnvDataset data;
    double ate_bias = 0.0;
    switch (cfg.kind) {
        case SweepKind::ConfoundingGrid:
        case SweepKind::EnvSampleGrid: {
            BinaryScmSpec spec = cfg.binary;
            spec.lambda = params[0];
            data = sample_binary_scm(spec, static_cast<int>(params[1]),
                                     static_cast<int>(params[2]), seed);
            break;
        }
        case SweepKind::JciComparison: {
            if (cfg.gauss_model) {
                GaussScmSpec spec = cfg.gauss;
                spec.lambda = params[0];
                spec.sigma_theta_y = params[1];
                data = sample_gauss_scm(spec, static_cast<int>(params[2]),
                                        static_cast<int>(params[3]), seed);
            } else {
                BinaryScmSpec spec = cfg.binary;
                spec.lambda = params[0];
                spec.sigma_theta_y = params[1];
                data = sample_binary_scm(spec, static_cast<int>(params[2]),
                                         static_cast<int>(params[3]), seed);
            }
            break;
        }
        case SweepKind::FaithfulnessGrid: {
            GaussScmSpec spec = cfg.gauss;
            spec.sigma_theta_t = params[0];
            spec.sigma_theta_u = params[1];
            data = sample_gauss_scm(spec, static_cast<int>(params[2]),
                                    static_cast<int>(params[3]), seed);
            break;
        }
        case SweepKind::SemiSynthGrid: {
            SemiSynthSpec spec;
            spec.p = cfg.semi_p;
            spec.lambda = params[0];
            spec.n_observed = static_cast<int>(params[1]);
            spec.seed = seed;
            auto [ds, trace] = generate_semi_synthetic(*table, spec);
            ate_bias = estimate_env_ate_bias(ds, trace);
            data = std::move(ds);
            break;
        }
    }

    std::vector<TidyRow> rows;
    {
        TidyRow row;
        row.cell = cell;
        row.rep = rep;
        row.seed = seed;
        row.method = "detect";
        row.ate_bias = ate_bias;
        const auto start = std::chrono::steady_clock::now();
        const auto report = detect(data, det);
        if (cfg.record_wall_time)
            row.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
        row.global_p = report.global_p;
        row.fisher_z = report.fisher_statistic;
        row.rejected = report.rejected;
        row.rounds_used = report.rounds_used;
        rows.push_back(std::move(row));
    }
    if (plan.with_jci) {
        TidyRow row;
        row.cell = cell;
        row.rep = rep;
        row.seed = seed;
        row.method = "jci";
        const auto start = std::chrono::steady_clock::now();
        const auto res = jci_baseline(data, det);
        if (cfg.record_wall_time)
            row.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
        row.global_p = res.p_value;
        row.fisher_z = -2.0 * std::log(std::clamp(res.p_value, 1e-300, 1.0));
        row.rejected = res.p_value <= cfg.alpha;
        row.rounds_used = 1;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string tidy_csv_header(const SweepResult& r) {
    std::ostringstream os;
    os << "cell,rep,seed";
    for (const auto& p : r.param_names) os << ',' << p;
    os << ",method,global_p,fisher_z,rejected,rounds_used";
    if (r.has_bias_column) os << ",ate_bias";
    os << ",wall_ms\n";
    return os.str();
}

std::string tidy_csv_row(const SweepResult& r, const TidyRow& row) {
    std::ostringstream os;
    os << row.cell << ',' << row.rep << ',' << row.seed;
    for (double p : r.cell_params[static_cast<std::size_t>(row.cell)]) os << ',' << fmt(p);
    os << ',' << row.method << ',' << fmt(row.global_p) << ',' << fmt(row.fisher_z) << ','
       << (row.rejected ? 1 : 0) << ',' << row.rounds_used;
    if (r.has_bias_column) os << ',' << fmt(row.ate_bias);
    os << ',' << fmt(row.wall_ms) << '\n';
    return os.str();
}

std::string tidy_csv(const SweepResult& r) {
    std::string out = tidy_csv_header(r);
    for (const auto& row : r.rows) out += tidy_csv_row(r, row);
    return out;
}

std::string summary_csv(const SweepResult& r) {
    std::ostringstream os;
    os << "cell";
    for (const auto& p : r.param_names) os << ',' << p;
    os << ",method,n_reps,detection_rate,se,mean_fisher_z,mean_wall_ms\n";
    std::map<std::pair<int, std::string>, std::vector<const TidyRow*>> groups;
    for (const auto& row : r.rows) groups[{row.cell, row.method}].push_back(&row);
    for (const auto& [key, rows] : groups) {
        const double n = static_cast<double>(rows.size());
        double rate = 0, mean_z = 0, mean_ms = 0;
        for (const auto* row : rows) {
            rate += row->rejected ? 1 : 0;
            mean_z += row->fisher_z;
            mean_ms += row->wall_ms;
        }
        rate /= n;
        mean_z /= n;
        mean_ms /= n;
        const double se = std::sqrt(rate * (1 - rate) / n);
        os << key.first;
        for (double p : r.cell_params[static_cast<std::size_t>(key.first)]) os << ',' << fmt(p);
        os << ',' << key.second << ',' << static_cast<int>(n) << ',' << fmt(rate) << ','
           << fmt(se) << ',' << fmt(mean_z) << ',' << fmt(mean_ms) << '\n';
    }
    return os.str();
}

SweepResult run_sweep(const SweepConfig& config, std::ostream* tidy) {
    SweepConfig cfg = config;
    cfg.apply_kind_defaults();
    if (cfg.repetitions < 1) throw UsageError("repetitions must be >= 1");
    if (cfg.workers < 1) throw UsageError("workers must be >= 1");

    const SweepPlan plan = make_plan(cfg);
    if (plan.cells.empty()) throw UsageError("sweep grid is empty");

    CovariateTable table;
    if (cfg.kind == SweepKind::SemiSynthGrid) {
        table = cfg.covariate_csv.empty()
                    ? make_demo_covariates(cfg.demo_envs, cfg.demo_rows, cfg.demo_cols, cfg.seed)
                    : load_covariate_csv(cfg.covariate_csv);
        table = table.filtered(cfg.min_variance, cfg.drop_binary);
        table.validate();
    }

    SweepResult result;
    result.kind = cfg.kind;
    result.alpha = cfg.alpha;
    result.param_names = plan.param_names;
    result.has_bias_column = plan.with_bias;
    for (const auto& c : plan.cells) result.cell_params.push_back(c.params);

    if (tidy) *tidy << tidy_csv_header(result) << std::flush;

    const int total = static_cast<int>(plan.cells.size()) * cfg.repetitions;
    std::vector<std::vector<TidyRow>> slots(static_cast<std::size_t>(total));
    std::vector<char> done(static_cast<std::size_t>(total), 0);
    std::atomic<int> next_task{0};
    std::mutex mu;
    int flushed = 0;
    std::string first_error;

    auto worker = [&] {
        while (true) {
            const int task = next_task.fetch_add(1);
            if (task >= total) break;
            const int cell = task / cfg.repetitions;
            const int rep = task % cfg.repetitions;
            std::vector<TidyRow> rows;
            std::string error;
            try {
                rows = run_task(cfg, plan, &table, cell, rep);
            } catch (const std::exception& e) {
                error = e.what();
            }
            std::lock_guard<std::mutex> lock(mu);
            if (!error.empty() && first_error.empty()) first_error = error;
            slots[static_cast<std::size_t>(task)] = std::move(rows);
            done[static_cast<std::size_t>(task)] = 1;
            while (flushed < total && done[static_cast<std::size_t>(flushed)]) {
                if (tidy)
                    for (const auto& row : slots[static_cast<std::size_t>(flushed)])
                        *tidy << tidy_csv_row(result, row);
                ++flushed;
            }
            if (tidy) tidy->flush();
        }
    };

    std::vector<std::thread> pool;
    for (int w = 0; w < cfg.workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    if (!first_error.empty()) throw DataError("sweep task failed: " + first_error);
    for (auto& rows : slots)
        for (auto& row : rows) result.rows.push_back(std::move(row));
    return result;
}

}  // namespace confdet
