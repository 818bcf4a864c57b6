#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "confdet/data_io.hpp"
#include "confdet/detector.hpp"
#include "confdet/errors.hpp"
#include "confdet/families.hpp"
#include "confdet/golden_tables.hpp"
#include "confdet/scm.hpp"
#include "confdet/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRejected = 10;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw confdet::DataError("cannot write file: " + path);
    out << content;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw confdet::DataError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string fmt_json_number(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string report_json(const confdet::DetectionReport& report) {
    std::ostringstream os;
    os << "{\"alpha\":" << fmt_json_number(report.alpha) << ",\"test\":\"" << report.test_name
       << "\",\"rounds\":[";
    for (std::size_t i = 0; i < report.round_p_values.size(); ++i) {
        if (i) os << ',';
        os << "{\"i\":" << (i + 1) << ",\"n_envs\":" << report.round_env_counts[i]
           << ",\"p\":" << fmt_json_number(report.round_p_values[i]) << '}';
    }
    os << "],\"fisher_z\":" << fmt_json_number(report.fisher_statistic)
       << ",\"global_p\":" << fmt_json_number(report.global_p)
       << ",\"rejected\":" << (report.rejected ? "true" : "false") << "}\n";
    return os.str();
}

int cmd_verify_tables(const std::string& out_dir, const std::string& golden_dir) {
    namespace fs = std::filesystem;
    const std::string t1 = confdet::adjusted_family_table_csv();
    const std::string t2 = confdet::two_var_family_table_csv();
    const std::string t3 = confdet::degenerate_table_csv();
    const std::string sel = confdet::selection_bias_csv();
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_text((fs::path(out_dir) / "table1.csv").string(), t1);
        write_text((fs::path(out_dir) / "table2.csv").string(), t2);
        write_text((fs::path(out_dir) / "table3.csv").string(), t3);
        write_text((fs::path(out_dir) / "selection_bias.csv").string(), sel);
    }

    std::string g1 = confdet::golden::kTable1;
    std::string g2 = confdet::golden::kTable2;
    std::string g3 = confdet::golden::kTable3;
    if (!golden_dir.empty()) {
        g1 = read_text((fs::path(golden_dir) / "table1.csv").string());
        g2 = read_text((fs::path(golden_dir) / "table2.csv").string());
        g3 = read_text((fs::path(golden_dir) / "table3.csv").string());
    }

    std::vector<std::string> diffs;
    for (const auto& d : confdet::diff_against_golden(t1, g1, "table1")) diffs.push_back(d);
    for (const auto& d : confdet::diff_against_golden(t2, g2, "table2")) diffs.push_back(d);
    for (const auto& d : confdet::diff_against_golden(t3, g3, "table3")) diffs.push_back(d);

    // The theorem-level equivalences, independent of the golden files.
    for (const auto& row : confdet::verify_adjusted_family_table())
        if (row.dsep == row.confounder)
            diffs.push_back("table1 row " + std::to_string(row.id) +
                            ": d-separation verdict does not match the confounder flag");
    for (const auto& row : confdet::verify_two_var_family_table())
        if ((!row.dsep_given_ti && !row.dsep_given_yj) != row.confounder)
            diffs.push_back("table2 row " + std::to_string(row.id) +
                            ": joint dependence does not match the confounder flag");

    if (diffs.empty()) {
        std::cout << "verify-tables: all 40 + 25 + 40x15 verdicts match the golden tables\n";
        return kExitOk;
    }
    for (const auto& d : diffs) std::cerr << "mismatch: " << d << '\n';
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hidden-confounding detection from multi-environment observational data"};
    app.require_subcommand(1);

    // ---- verify-tables ----
    auto* verify = app.add_subcommand("verify-tables",
                                      "Re-derive the d-separation proof tables and compare "
                                      "against the golden copies");
    std::string verify_out = "tables";
    std::string golden_dir;
    verify->add_option("--out", verify_out, "Directory for the emitted CSVs (empty to skip)")
        ->capture_default_str();
    verify->add_option("--golden-dir", golden_dir,
                       "Compare against table{1,2,3}.csv in this directory instead of the "
                       "built-in copies");

    // ---- simulate ----
    auto* simulate = app.add_subcommand("simulate", "Sample a synthetic multi-environment dataset");
    std::string sim_model = "binary";
    int sim_envs = 100, sim_n = 2;
    std::uint64_t sim_seed = 0;
    std::string sim_out = "dataset.csv";
    confdet::BinaryScmSpec bin_spec;
    confdet::GaussScmSpec gauss_spec;
    std::vector<std::string> sim_degenerate;
    simulate->add_option("--model", sim_model, "binary | gauss")->capture_default_str();
    simulate->add_option("--envs,-k", sim_envs, "Number of environments")->capture_default_str();
    simulate->add_option("--n-per-env,-n", sim_n, "Observations per environment")
        ->capture_default_str();
    simulate->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
    simulate->add_option("--out,-o", sim_out, "Output CSV path")->capture_default_str();
    simulate->add_option("--lambda", bin_spec.lambda, "Confounder->outcome strength")
        ->capture_default_str();
    simulate->add_option("--sigma-theta-t", bin_spec.sigma_theta_t)->capture_default_str();
    simulate->add_option("--sigma-theta-y", bin_spec.sigma_theta_y)->capture_default_str();
    simulate->add_option("--sigma-theta-u", bin_spec.sigma_theta_u)->capture_default_str();
    simulate->add_option("--beta", gauss_spec.beta, "Treatment effect (gauss)")
        ->capture_default_str();
    simulate->add_option("--gamma", gauss_spec.gamma, "Confounder->treatment strength (gauss)")
        ->capture_default_str();
    simulate->add_option("--sigma-t", gauss_spec.sigma_t)->capture_default_str();
    simulate->add_option("--sigma-y", gauss_spec.sigma_y)->capture_default_str();
    simulate->add_option("--sigma-u", gauss_spec.sigma_u)->capture_default_str();
    simulate->add_option("--degenerate", sim_degenerate,
                         "Mechanisms to hold fixed (gauss): Theta_T Theta_Y Theta_U");

    // ---- detect ----
    auto* detect_cmd = app.add_subcommand("detect", "Run the detection procedure on a dataset CSV");
    std::string det_data;
    std::string det_test = "g_test";
    std::string det_theorem = "covariates";
    std::string det_json_out;
    confdet::DetectorConfig det_cfg;
    detect_cmd->add_option("--data,-d", det_data, "Dataset CSV (env,t,y[,x...])")->required();
    detect_cmd->add_option("--alpha", det_cfg.alpha, "Significance level")->capture_default_str();
    detect_cmd->add_option("--test", det_test, "g_test | partial_corr | permutation | kci")
        ->capture_default_str();
    detect_cmd->add_option("--k-min", det_cfg.k_min, "Minimum environments per round")
        ->capture_default_str();
    detect_cmd->add_option("--theorem", det_theorem, "covariates | two-variable")
        ->capture_default_str();
    int det_max_rounds = 0;
    detect_cmd->add_option("--max-rounds", det_max_rounds, "Cap on combined rounds (0 = none)")
        ->capture_default_str();
    detect_cmd->add_option("--seed", det_cfg.seed, "Seed for permutation streams")
        ->capture_default_str();
    detect_cmd->add_option("--n-perm", det_cfg.n_perm, "Permutation replicates")
        ->capture_default_str();
    detect_cmd->add_option("--json", det_json_out, "Also write the report JSON to this path");
    bool det_jci = false;
    detect_cmd->add_flag("--jci-baseline", det_jci, "Run the Y _||_ E | T baseline instead");

    // ---- sweep ----
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a reproducible experiment grid");
    std::string sweep_kind = "confounding-grid";
    std::string sweep_out = "sweep_tidy.csv";
    std::string sweep_summary = "sweep_summary.csv";
    std::string sweep_test;
    confdet::SweepConfig sweep_cfg;
    int sweep_max_rounds = 0;
    sweep_cmd
        ->add_option("--kind", sweep_kind,
                     "confounding-grid | env-sample-grid | jci-comparison | faithfulness-grid | "
                     "semi-synth-grid")
        ->capture_default_str();
    sweep_cmd->add_option("--out,-o", sweep_out, "Tidy CSV path (one row per cell x rep)")
        ->capture_default_str();
    sweep_cmd->add_option("--summary", sweep_summary, "Aggregated CSV path")
        ->capture_default_str();
    sweep_cmd->add_option("--reps", sweep_cfg.repetitions, "Repetitions per cell")
        ->capture_default_str();
    sweep_cmd->add_option("--alpha", sweep_cfg.alpha)->capture_default_str();
    sweep_cmd->add_option("--k-min", sweep_cfg.k_min)->capture_default_str();
    sweep_cmd->add_option("--seed", sweep_cfg.seed)->capture_default_str();
    sweep_cmd->add_option("--workers", sweep_cfg.workers)->capture_default_str();
    sweep_cmd->add_option("--test", sweep_test, "Override the kind's default CI test");
    sweep_cmd->add_option("--max-rounds", sweep_max_rounds, "Cap on combined rounds (0 = none)");
    sweep_cmd->add_option("--lambda", sweep_cfg.lambdas, "Lambda grid values");
    sweep_cmd->add_option("--envs", sweep_cfg.n_envs, "Environment-count grid values");
    sweep_cmd->add_option("--n-per-env", sweep_cfg.n_per_env, "Observations-per-env grid values");
    sweep_cmd->add_option("--sigma-theta-y", sweep_cfg.sigma_theta_y_values,
                          "sigma_theta_y grid values (jci-comparison)");
    sweep_cmd->add_option("--sigma-theta-t", sweep_cfg.sigma_theta_t_values,
                          "sigma_theta_t grid values (faithfulness-grid)");
    sweep_cmd->add_option("--sigma-theta-u", sweep_cfg.sigma_theta_u_values,
                          "sigma_theta_u grid values (faithfulness-grid)");
    sweep_cmd->add_flag("--gauss", sweep_cfg.gauss_model,
                        "Use the linear-Gaussian model for jci-comparison");
    sweep_cmd->add_option("--cov", sweep_cfg.covariate_csv,
                          "Covariate CSV for semi-synth-grid (default: built-in demo table)");
    sweep_cmd->add_option("--p", sweep_cfg.semi_p, "Covariates drawn into the semi-synth SCM")
        ->capture_default_str();
    sweep_cmd->add_option("--n-observed", sweep_cfg.n_observed_values,
                          "n_observed grid values (semi-synth-grid)");
    sweep_cmd->add_option("--n-perm", sweep_cfg.n_perm)->capture_default_str();
    sweep_cmd->add_option("--min-variance", sweep_cfg.min_variance,
                          "Drop covariates with variance <= this")
        ->capture_default_str();
    sweep_cmd->add_flag("--drop-binary", sweep_cfg.drop_binary, "Drop binary covariates");
    bool sweep_no_timing = false;
    sweep_cmd->add_flag("--no-timing", sweep_no_timing,
                        "Write 0 for wall_ms so outputs are byte-identical under a fixed seed");

    // ---- semi-synth ----
    auto* semi = app.add_subcommand("semi-synth",
                                    "Generate a semi-synthetic dataset from a covariate table");
    std::string semi_cov;
    std::string semi_out = "semi_synth.csv";
    std::string semi_trace_out;
    bool semi_demo = false;
    int semi_demo_envs = 150, semi_demo_rows = 110, semi_demo_cols = 6;
    bool semi_report_bias = false;
    double semi_min_variance = 0.0;
    bool semi_drop_binary = false;
    std::string semi_cov_out;
    confdet::SemiSynthSpec semi_spec;
    semi->add_option("--cov", semi_cov, "Input covariate CSV (env,<c1>,...)");
    semi->add_flag("--demo", semi_demo, "Use the built-in synthetic covariate table");
    semi->add_option("--demo-envs", semi_demo_envs)->capture_default_str();
    semi->add_option("--demo-rows", semi_demo_rows)->capture_default_str();
    semi->add_option("--demo-cols", semi_demo_cols)->capture_default_str();
    semi->add_option("--write-cov", semi_cov_out, "Also write the covariate table used");
    semi->add_option("--p", semi_spec.p, "Covariates drawn into the SCM")->capture_default_str();
    semi->add_option("--n-observed", semi_spec.n_observed, "Covariates exported as x columns")
        ->capture_default_str();
    semi->add_option("--lambda", semi_spec.lambda, "Confounding strength multiplier")
        ->capture_default_str();
    semi->add_option("--seed", semi_spec.seed)->capture_default_str();
    semi->add_option("--out,-o", semi_out, "Output dataset CSV")->capture_default_str();
    semi->add_option("--trace", semi_trace_out, "Write the generation trace JSON here");
    semi->add_option("--min-variance", semi_min_variance,
                     "Drop covariates with variance <= this before drawing")
        ->capture_default_str();
    semi->add_flag("--drop-binary", semi_drop_binary, "Drop binary covariates before drawing");
    semi->add_flag("--report-bias", semi_report_bias,
                   "Print the per-environment omitted-confounder ATE bias");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (verify->parsed()) return cmd_verify_tables(verify_out, golden_dir);

        if (simulate->parsed()) {
            confdet::MultiEnvDataset ds;
            if (sim_model == "binary") {
                ds = confdet::sample_binary_scm(bin_spec, sim_envs, sim_n, sim_seed);
            } else if (sim_model == "gauss") {
                gauss_spec.lambda = bin_spec.lambda;
                gauss_spec.sigma_theta_t = bin_spec.sigma_theta_t;
                gauss_spec.sigma_theta_y = bin_spec.sigma_theta_y;
                gauss_spec.sigma_theta_u = bin_spec.sigma_theta_u;
                std::set<std::string> degenerate(sim_degenerate.begin(), sim_degenerate.end());
                ds = confdet::sample_gauss_scm(gauss_spec, sim_envs, sim_n, sim_seed, degenerate);
            } else {
                throw confdet::UsageError("unknown model: " + sim_model);
            }
            confdet::write_multi_env_csv(ds, sim_out);
            std::cout << "wrote " << sim_out << " (" << ds.n_envs() << " environments)\n";
            return kExitOk;
        }

        if (detect_cmd->parsed()) {
            det_cfg.test = confdet::ci_test_from_string(det_test);
            det_cfg.theorem = confdet::theorem_mode_from_string(det_theorem);
            if (det_max_rounds > 0) det_cfg.max_rounds = det_max_rounds;
            const auto data = confdet::load_multi_env_csv(det_data);
            if (det_jci) {
                const auto res = confdet::jci_baseline(data, det_cfg);
                std::ostringstream os;
                os << "{\"test\":\"" << res.test_name << "\",\"p\":" << fmt_json_number(res.p_value)
                   << ",\"statistic\":" << fmt_json_number(res.statistic)
                   << ",\"rejected\":" << (res.p_value <= det_cfg.alpha ? "true" : "false")
                   << "}\n";
                std::cout << os.str();
                if (!det_json_out.empty()) write_text(det_json_out, os.str());
                return res.p_value <= det_cfg.alpha ? kExitRejected : kExitOk;
            }
            const auto report = confdet::detect(data, det_cfg);
            const std::string json = report_json(report);
            std::cout << json;
            if (!det_json_out.empty()) write_text(det_json_out, json);
            return report.rejected ? kExitRejected : kExitOk;
        }

        if (sweep_cmd->parsed()) {
            sweep_cfg.kind = confdet::sweep_kind_from_string(sweep_kind);
            if (!sweep_test.empty()) sweep_cfg.test = confdet::ci_test_from_string(sweep_test);
            if (sweep_max_rounds > 0) sweep_cfg.max_rounds = sweep_max_rounds;
            sweep_cfg.record_wall_time = !sweep_no_timing;
            std::ofstream tidy(sweep_out, std::ios::binary);
            if (!tidy) throw confdet::DataError("cannot write file: " + sweep_out);
            const auto result = confdet::run_sweep(sweep_cfg, &tidy);
            tidy.close();
            write_text(sweep_summary, confdet::summary_csv(result));
            std::cout << "wrote " << sweep_out << " and " << sweep_summary << " ("
                      << result.rows.size() << " rows)\n";
            return kExitOk;
        }

        if (semi->parsed()) {
            confdet::CovariateTable table;
            if (!semi_cov.empty())
                table = confdet::load_covariate_csv(semi_cov);
            else if (semi_demo)
                table = confdet::make_demo_covariates(semi_demo_envs, semi_demo_rows,
                                                      semi_demo_cols, semi_spec.seed);
            else
                throw confdet::UsageError("semi-synth needs --cov FILE or --demo");
            table = table.filtered(semi_min_variance, semi_drop_binary);
            table.validate();
            if (!semi_cov_out.empty())
                write_text(semi_cov_out, confdet::covariate_csv_string(table));
            auto [ds, trace] = confdet::generate_semi_synthetic(table, semi_spec);
            confdet::write_multi_env_csv(ds, semi_out);
            if (!semi_trace_out.empty())
                write_text(semi_trace_out, confdet::trace_to_json(trace) + "\n");
            std::cout << "wrote " << semi_out << " (" << ds.n_envs() << " environments, "
                      << ds.n_covariates() << " observed covariates)\n";
            if (semi_report_bias)
                std::cout << "ate_bias: "
                          << fmt_json_number(confdet::estimate_env_ate_bias(ds, trace)) << "\n";
            return kExitOk;
        }
    } catch (const confdet::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const confdet::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const confdet::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitUsage;
}
