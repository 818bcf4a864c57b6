// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criterion 9 exercises the CLI binary passed via --cli.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "confdet/ci_tests.hpp"
#include "confdet/data_io.hpp"
#include "confdet/detector.hpp"
#include "confdet/families.hpp"
#include "confdet/golden_tables.hpp"
#include "confdet/rng.hpp"
#include "confdet/scm.hpp"
#include "confdet/stats.hpp"
#include "confdet/sweep.hpp"

using namespace confdet;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int g_failures = 0;

void report(int id, const std::string& name, const Outcome& outcome, double seconds) {
    std::ostringstream os;
    os << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << name << " ("
       << std::fixed;
    os.precision(1);
    os << seconds << "s)";
    if (!outcome.detail.empty()) os << " -- " << outcome.detail;
    std::cout << os.str() << std::endl;
    if (!outcome.pass) ++g_failures;
}

template <typename F>
void run(int id, const std::string& name, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = f();
    } catch (const std::exception& e) {
        outcome.pass = false;
        outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(id, name, outcome, seconds);
}

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

double binomial_se(double p, int n) { return std::sqrt(p * (1 - p) / n); }

// ---------------------------------------------------------------- criterion 1
Outcome criterion1() {
    Outcome out;
    std::vector<std::string> diffs;
    for (const auto& d : diff_against_golden(adjusted_family_table_csv(), golden::kTable1, "table1"))
        diffs.push_back(d);
    for (const auto& d : diff_against_golden(two_var_family_table_csv(), golden::kTable2, "table2"))
        diffs.push_back(d);
    for (const auto& d : diff_against_golden(degenerate_table_csv(), golden::kTable3, "table3"))
        diffs.push_back(d);
    for (const auto& row : verify_adjusted_family_table())
        if (row.dsep != !row.confounder)
            diffs.push_back("adjusted-family equivalence fails at row " + std::to_string(row.id));
    for (const auto& row : verify_two_var_family_table())
        if ((!row.dsep_given_ti && !row.dsep_given_yj) != row.confounder)
            diffs.push_back("two-variable equivalence fails at row " + std::to_string(row.id));
    out.pass = diffs.empty();
    out.detail = out.pass ? "40 + 25 + 40x15 cells match; equivalences hold"
                          : diffs.front() + " (+" + std::to_string(diffs.size() - 1) + " more)";
    return out;
}

double binary_detection_rate(double lambda, int n_envs, int n_per_env, int reps,
                             std::uint64_t seed0, double sigma_theta_y = 1.0,
                             std::optional<int> max_rounds = {}) {
    BinaryScmSpec spec;
    spec.lambda = lambda;
    spec.sigma_theta_y = sigma_theta_y;
    int rejections = 0;
    for (int rep = 0; rep < reps; ++rep) {
        DetectorConfig cfg;
        cfg.seed = seed0 + static_cast<std::uint64_t>(rep);
        cfg.max_rounds = max_rounds;
        const auto data = sample_binary_scm(spec, n_envs, n_per_env, cfg.seed);
        rejections += detect(data, cfg).rejected;
    }
    return static_cast<double>(rejections) / reps;
}

// ---------------------------------------------------------------- criterion 2
Outcome criterion2() {
    const int reps = 100;
    const double rate = binary_detection_rate(0.0, 500, 100, reps, 20'001);
    const double band = 3 * binomial_se(0.05, reps);
    Outcome out;
    out.pass = std::fabs(rate - 0.05) <= band;
    out.detail = "null rejection " + fmt(rate) + " vs 0.05 +/- " + fmt(band) +
                 " (Fisher over 50 rounds)";
    return out;
}

// ---------------------------------------------------------------- criterion 3
Outcome criterion3() {
    const int reps = 100;
    std::map<double, double> by_lambda;
    for (double lambda : {0.0, 2.0, 5.0, 10.0})
        by_lambda[lambda] = binary_detection_rate(lambda, 500, 2, reps, 30'001);
    std::map<int, double> by_k;
    for (int k : {50, 200})
        by_k[k] = binary_detection_rate(5.0, k, 2, reps, 30'001);
    by_k[500] = by_lambda[5.0];

    int inversions = 0;
    auto count_inversions = [&](const std::vector<double>& rates) {
        for (std::size_t i = 0; i + 1 < rates.size(); ++i) {
            const double se =
                std::sqrt(binomial_se(std::max(rates[i], 0.02), reps) *
                              binomial_se(std::max(rates[i], 0.02), reps) +
                          binomial_se(std::max(rates[i + 1], 0.02), reps) *
                              binomial_se(std::max(rates[i + 1], 0.02), reps));
            if (rates[i + 1] < rates[i] - se) ++inversions;
        }
    };
    count_inversions({by_lambda[0.0], by_lambda[2.0], by_lambda[5.0], by_lambda[10.0]});
    count_inversions({by_k[50], by_k[200], by_k[500]});

    const bool threshold_ok = by_lambda[5.0] >= 0.8;
    Outcome out;
    out.pass = threshold_ok && inversions <= 1;
    out.detail = "rate(lambda=5,K=500)=" + fmt(by_lambda[5.0]) +
                 (threshold_ok ? " >= 0.8" : " < 0.8 [exact-oracle power ceiling is 0.649 "
                                             "for the printed generator; see ledger]") +
                 "; lambda curve " + fmt(by_lambda[0.0]) + "/" + fmt(by_lambda[2.0]) + "/" +
                 fmt(by_lambda[5.0]) + "/" + fmt(by_lambda[10.0]) + ", K curve " +
                 fmt(by_k[50]) + "/" + fmt(by_k[200]) + "/" + fmt(by_k[500]) +
                 ", SE-level inversions=" + std::to_string(inversions);
    return out;
}

// ---------------------------------------------------------------- criterion 4
Outcome criterion4() {
    const int reps = 100;
    const std::vector<double> sigmas = {0.0, 0.1, 0.25};
    std::vector<double> jci_rates, det_rates;
    for (double sy : sigmas) {
        BinaryScmSpec spec;
        spec.lambda = 0;
        spec.sigma_theta_y = sy;
        int jci_rej = 0, det_rej = 0;
        for (int rep = 0; rep < reps; ++rep) {
            DetectorConfig cfg;
            cfg.seed = 40'001 + static_cast<std::uint64_t>(rep);
            const auto data = sample_binary_scm(spec, 500, 100, cfg.seed);
            jci_rej += jci_baseline(data, cfg).p_value <= cfg.alpha;
            det_rej += detect(data, cfg).rejected;
        }
        jci_rates.push_back(static_cast<double>(jci_rej) / reps);
        det_rates.push_back(static_cast<double>(det_rej) / reps);
    }
    const double band = 3 * binomial_se(0.05, reps);
    bool pass = jci_rates[0] < jci_rates[1] && jci_rates[1] < jci_rates[2];
    pass = pass && jci_rates[2] > 0.5;
    for (double r : det_rates) pass = pass && std::fabs(r - 0.05) <= band;
    Outcome out;
    out.pass = pass;
    out.detail = "jci " + fmt(jci_rates[0]) + "/" + fmt(jci_rates[1]) + "/" + fmt(jci_rates[2]) +
                 " rising, ours " + fmt(det_rates[0]) + "/" + fmt(det_rates[1]) + "/" +
                 fmt(det_rates[2]) + " near alpha";
    return out;
}

// ---------------------------------------------------------------- criterion 5
Outcome criterion5() {
    GaussScmSpec base;
    base.sigma_t = 2.0 / 3.0;  // the faithfulness-grid operating point
    base.sigma_u = 1.0;
    Outcome out;

    // Analytic zero on the locus for several parameter points.
    double worst = 0;
    for (double sigma_theta_t : {0.5, 1.0, 2.0, 3.5}) {
        GaussScmSpec spec = base;
        spec.sigma_theta_t = sigma_theta_t;
        spec.sigma_theta_u = faithfulness_locus(spec.sigma_u, spec.sigma_t, sigma_theta_t);
        worst = std::max(worst, std::fabs(analytic_partial_correlation(spec)));
    }
    if (worst >= 1e-12) {
        out.pass = false;
        out.detail = "analytic rho at locus " + fmt(worst, 3) + " >= 1e-12";
        return out;
    }

    const int reps = 200;
    auto rate_at = [&](double sigma_theta_u) {
        GaussScmSpec spec = base;
        spec.sigma_theta_u = sigma_theta_u;
        int rej = 0;
        for (int rep = 0; rep < reps; ++rep) {
            DetectorConfig cfg;
            cfg.test = CiTestKind::PartialCorr;
            cfg.seed = 50'001 + static_cast<std::uint64_t>(rep);
            rej += detect(sample_gauss_scm(spec, 1000, 2, cfg.seed), cfg).rejected;
        }
        return static_cast<double>(rej) / reps;
    };
    const double on_locus = rate_at(1.5);  // sigma_theta_t = 1 -> locus at 1.5
    const std::vector<double> off = {rate_at(0.5), rate_at(2.5), rate_at(3.5)};
    const double band = 3 * binomial_se(0.05, reps);
    bool pass = std::fabs(on_locus - 0.05) <= band;
    for (double r : off) pass = pass && r >= 0.5;
    out.pass = pass;
    out.detail = "analytic |rho| < 1e-12 on locus; detection on locus " + fmt(on_locus) +
                 ", at distance >= 1: " + fmt(off[0]) + "/" + fmt(off[1]) + "/" + fmt(off[2]);
    return out;
}

// ---------------------------------------------------------------- criterion 6
Outcome criterion6() {
    Outcome out;
    std::vector<std::string> problems;

    {  // Moments vs sample moments at K = 2e5 (lambda = beta*gamma keeps the
       // printed Var(Y) exact; see ledger).
        GaussScmSpec spec;
        spec.sigma_theta_u = 2.0;
        const int n_envs = 200'000;
        const auto ds = sample_gauss_scm(spec, n_envs, 2, 60'001);
        const auto analytic = analytic_cross_covariances(spec);
        double mt = 0, my = 0;
        for (const auto& env : ds.envs) {
            mt += env.t[0] + env.t[1];
            my += env.y[0] + env.y[1];
        }
        mt /= 2.0 * n_envs;
        my /= 2.0 * n_envs;
        std::vector<double> v_tj_yi, v_tj_ti, v_ti_yi, v_var_t, v_var_y;
        for (const auto& env : ds.envs) {
            const double tj = env.t[0] - mt, ti = env.t[1] - mt;
            const double yj = env.y[0] - my, yi = env.y[1] - my;
            v_tj_yi.push_back(tj * yi);
            v_tj_ti.push_back(tj * ti);
            v_ti_yi.push_back(ti * yi);
            v_var_t.push_back((tj * tj + ti * ti) / 2);
            v_var_y.push_back((yj * yj + yi * yi) / 2);
        }
        auto check_moment = [&](const char* name, const std::vector<double>& vals, double want) {
            double mean = 0;
            for (double v : vals) mean += v;
            mean /= static_cast<double>(vals.size());
            double var = 0;
            for (double v : vals) var += (v - mean) * (v - mean);
            var /= static_cast<double>(vals.size() - 1);
            const double se = std::sqrt(var / static_cast<double>(vals.size()));
            if (std::fabs(mean - want) > 3 * se)
                problems.push_back(std::string(name) + " off: sample " + fmt(mean) + " vs " +
                                   fmt(want) + " (3se=" + fmt(3 * se) + ")");
        };
        check_moment("cov_tj_yi", v_tj_yi, analytic.cov_tj_yi);
        check_moment("cov_tj_ti", v_tj_ti, analytic.cov_tj_ti);
        check_moment("cov_ti_yi", v_ti_yi, analytic.cov_ti_yi);
        check_moment("var_t", v_var_t, analytic.var_t);
        check_moment("var_y", v_var_y, analytic.var_y);
    }

    {  // Omitted-variable bias vs pooled OLS at n = 1e5 (exact when T has no
       // noise of its own).
        GaussScmSpec spec;
        spec.gamma = 2.0;
        spec.lambda = 1.0;
        spec.sigma_t = 0.0;
        spec.sigma_theta_t = 0.0;
        const auto ds = sample_gauss_scm(spec, 50'000, 2, 60'017);
        double st = 0, sy = 0;
        int n = 0;
        for (const auto& env : ds.envs)
            for (int i = 0; i < env.n_obs(); ++i) {
                st += env.t[static_cast<std::size_t>(i)];
                sy += env.y[static_cast<std::size_t>(i)];
                ++n;
            }
        st /= n;
        sy /= n;
        double stt = 0, sty = 0;
        for (const auto& env : ds.envs)
            for (int i = 0; i < env.n_obs(); ++i) {
                const double t = env.t[static_cast<std::size_t>(i)] - st;
                const double y = env.y[static_cast<std::size_t>(i)] - sy;
                stt += t * t;
                sty += t * y;
            }
        const double slope = sty / stt;
        double ss_res = 0;
        for (const auto& env : ds.envs)
            for (int i = 0; i < env.n_obs(); ++i) {
                const double t = env.t[static_cast<std::size_t>(i)] - st;
                const double y = env.y[static_cast<std::size_t>(i)] - sy;
                ss_res += (y - slope * t) * (y - slope * t);
            }
        const double se_slope = std::sqrt(ss_res / (n - 2) / stt);
        const double want = omitted_variable_bias(spec);  // -lambda/gamma
        const double got = -(slope - spec.beta);
        if (std::fabs(got - want) > 3 * se_slope)
            problems.push_back("ols bias off: " + fmt(got) + " vs " + fmt(want) +
                               " (3se=" + fmt(3 * se_slope) + ")");
    }

    {  // Asymptotes (off-locus point, sigma_theta_u = 5).
        GaussScmSpec spec;
        spec.sigma_theta_u = 5.0;
        const double r10 = std::fabs(partial_correlation_asymptote(spec, AsymptoteAxis::Gamma, 10));
        const double r100 =
            std::fabs(partial_correlation_asymptote(spec, AsymptoteAxis::Gamma, 100));
        const double r1000 =
            std::fabs(partial_correlation_asymptote(spec, AsymptoteAxis::Gamma, 1000));
        if (std::fabs(r10 / r100 - 1000.0) > 100.0)
            problems.push_back("gamma decade ratio 10->100 = " + fmt(r10 / r100));
        if (std::fabs(r100 / r1000 - 1000.0) > 100.0)
            problems.push_back("gamma decade ratio 100->1000 = " + fmt(r100 / r1000));
        const double l2 = partial_correlation_asymptote(spec, AsymptoteAxis::Lambda, 1e2);
        const double l4 = partial_correlation_asymptote(spec, AsymptoteAxis::Lambda, 1e4);
        if (std::fabs(l2 - l4) >= 1e-3)
            problems.push_back("lambda convergence gap " + fmt(std::fabs(l2 - l4), 3));
    }

    out.pass = problems.empty();
    out.detail = out.pass
                     ? "five moments within 3 MC SE; OLS bias matches -lambda/gamma; "
                       "gamma^-3 decades within 10%; lambda gap < 1e-3"
                     : problems.front() + " (+" + std::to_string(problems.size() - 1) + " more)";
    return out;
}

// ---------------------------------------------------------------- criterion 7
struct SemiSynthCell {
    double mean_abs_bias = 0;
    double mean_fisher_z = 0;
    double detection_rate = 0;
};

SemiSynthCell semi_synth_cell(const CovariateTable& table, double lambda, int p, int n_observed,
                              int reps, std::uint64_t seed0) {
    SemiSynthCell cell;
    int rejections = 0;
    for (int rep = 0; rep < reps; ++rep) {
        SemiSynthSpec spec;
        spec.p = p;
        spec.n_observed = n_observed;
        spec.lambda = lambda;
        spec.seed = seed0 + static_cast<std::uint64_t>(rep);
        const auto [ds, trace] = generate_semi_synthetic(table, spec);
        cell.mean_abs_bias += std::fabs(estimate_env_ate_bias(ds, trace)) / reps;
        DetectorConfig cfg;
        cfg.test = CiTestKind::Kci;
        cfg.max_rounds = 50;
        cfg.seed = spec.seed;
        const auto report = detect(ds, cfg);
        cell.mean_fisher_z += report.fisher_statistic / reps;
        rejections += report.rejected;
    }
    cell.detection_rate = static_cast<double>(rejections) / reps;
    return cell;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<int> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int i, int j) { return v[static_cast<std::size_t>(i)] < v[static_cast<std::size_t>(j)]; });
        std::vector<double> r(v.size());
        for (std::size_t pos = 0; pos < idx.size(); ++pos)
            r[static_cast<std::size_t>(idx[pos])] = static_cast<double>(pos);
        return r;
    };
    const auto ra = ranks(a);
    const auto rb = ranks(b);
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= n;
    mb /= n;
    double saa = 0, sbb = 0, sab = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
        sab += (ra[i] - ma) * (rb[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

Outcome criterion7() {
    // Bundled synthetic covariate table: >= 20 environments, >= 5 usable columns.
    const auto table = make_demo_covariates(150, 110, 6, 777);
    const int reps = 30;
    Outcome out;
    std::vector<std::string> problems;

    // (a) Fisher statistic tracks the omitted-confounder bias across lambda.
    std::vector<double> biases, zs;
    for (double lambda : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}) {
        const auto cell = semi_synth_cell(table, lambda, 5, 0, reps, 70'001);
        biases.push_back(cell.mean_abs_bias);
        zs.push_back(cell.mean_fisher_z);
    }
    const double rho_rank = spearman(biases, zs);
    if (!(rho_rank > 0.8)) problems.push_back("rank correlation " + fmt(rho_rank) + " <= 0.8");

    // (b) All confounders observed: type-1 control.
    const auto observed_all = semi_synth_cell(table, 5.0, 3, 3, reps, 70'101);
    const double band = 3 * binomial_se(0.05, reps);
    if (std::fabs(observed_all.detection_rate - 0.05) > band)
        problems.push_back("all-observed rejection " + fmt(observed_all.detection_rate) +
                           " outside 0.05 +/- " + fmt(band));

    // (c) Detection rate nonincreasing as more confounders are observed.
    std::vector<double> rates;
    for (int n_obs : {0, 1, 2}) {
        const auto cell = semi_synth_cell(table, 5.0, 3, n_obs, reps, 70'101);
        rates.push_back(cell.detection_rate);
    }
    rates.push_back(observed_all.detection_rate);
    for (std::size_t i = 0; i + 1 < rates.size(); ++i)
        if (rates[i + 1] > rates[i] + 1e-12) {
            problems.push_back("rate increased from n_observed " + std::to_string(i) + " to " +
                               std::to_string(i + 1));
            break;
        }

    out.pass = problems.empty();
    std::ostringstream os;
    os << "rank corr " << fmt(rho_rank) << "; adjusted-for-all rate "
       << fmt(observed_all.detection_rate) << "; rates by n_observed " << fmt(rates[0]) << "/"
       << fmt(rates[1]) << "/" << fmt(rates[2]) << "/" << fmt(rates[3]);
    if (!problems.empty()) os << "; " << problems.front();
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------- criterion 8
Outcome criterion8() {
    Outcome out;
    std::vector<std::string> problems;
    const int reps = 500;
    const double band = 3 * binomial_se(0.05, reps);
    Rng rng(80'001);

    {  // G-test: a _||_ b | c with both legs driven by c.
        int rej = 0;
        for (int rep = 0; rep < reps; ++rep) {
            std::vector<double> a, b, c;
            for (int i = 0; i < 400; ++i) {
                const double cv = rng.bernoulli(0.5);
                c.push_back(cv);
                a.push_back(rng.bernoulli(0.3 + 0.4 * cv));
                b.push_back(rng.bernoulli(0.6 - 0.2 * cv));
            }
            SampleMatrix m;
            m.add_binary("a", a);
            m.add_binary("b", b);
            m.add_binary("c", c);
            rej += g_test_ci(m, "a", "b", {"c"}).p_value <= 0.05;
        }
        const double rate = static_cast<double>(rej) / reps;
        if (std::fabs(rate - 0.05) > band) problems.push_back("g_test null rate " + fmt(rate));
    }

    {  // Partial correlation: conditional null through a shared regressor.
        int rej = 0;
        for (int rep = 0; rep < reps; ++rep) {
            std::vector<double> a(500), b(500), c(500);
            for (int i = 0; i < 500; ++i) {
                const auto idx = static_cast<std::size_t>(i);
                c[idx] = rng.normal();
                a[idx] = 0.5 * c[idx] + rng.normal();
                b[idx] = -0.3 * c[idx] + rng.normal();
            }
            SampleMatrix m;
            m.add_continuous("a", a);
            m.add_continuous("b", b);
            m.add_continuous("c", c);
            rej += partial_correlation_test(m, "a", "b", {"c"}).p_value <= 0.05;
        }
        const double rate = static_cast<double>(rej) / reps;
        if (std::fabs(rate - 0.05) > band)
            problems.push_back("partial_corr null rate " + fmt(rate));
    }

    {  // Permutation: continuous statistic within binary strata.
        int rej = 0;
        for (int rep = 0; rep < reps; ++rep) {
            std::vector<double> a(60), b(60), c(60);
            for (int i = 0; i < 60; ++i) {
                const auto idx = static_cast<std::size_t>(i);
                c[idx] = i % 2;
                a[idx] = 0.8 * c[idx] + rng.normal();
                b[idx] = -0.8 * c[idx] + rng.normal();
            }
            SampleMatrix m;
            m.add_continuous("a", a);
            m.add_continuous("b", b);
            m.add_binary("c", c);
            rej += permutation_ci_test(m, "a", "b", {"c"}, 199, rng.next_u64()).p_value <= 0.05;
        }
        const double rate = static_cast<double>(rej) / reps;
        if (std::fabs(rate - 0.05) > band)
            problems.push_back("permutation null rate " + fmt(rate));
    }

    {  // KCI: unconditional null at n=200.
        int rej = 0;
        for (int rep = 0; rep < reps; ++rep) {
            std::vector<double> a(200), b(200);
            for (int i = 0; i < 200; ++i) {
                a[static_cast<std::size_t>(i)] = rng.normal();
                b[static_cast<std::size_t>(i)] = rng.normal();
            }
            SampleMatrix m;
            m.add_continuous("a", a);
            m.add_continuous("b", b);
            rej += kernel_ci_test(m, "a", "b").p_value <= 0.05;
        }
        const double rate = static_cast<double>(rej) / reps;
        if (std::fabs(rate - 0.05) > band)
            problems.push_back("kci unconditional null rate " + fmt(rate));
    }

    {  // KCI: conditional null at n=300.
        int rej = 0;
        for (int rep = 0; rep < reps; ++rep) {
            std::vector<double> a(300), b(300), c(300);
            for (int i = 0; i < 300; ++i) {
                const auto idx = static_cast<std::size_t>(i);
                c[idx] = rng.normal();
                a[idx] = std::tanh(c[idx]) + 0.5 * rng.normal();
                b[idx] = 0.5 * c[idx] * c[idx] + 0.5 * rng.normal();
            }
            SampleMatrix m;
            m.add_continuous("a", a);
            m.add_continuous("b", b);
            m.add_continuous("c", c);
            rej += kernel_ci_test(m, "a", "b", {"c"}).p_value <= 0.05;
        }
        const double rate = static_cast<double>(rej) / reps;
        if (std::fabs(rate - 0.05) > band)
            problems.push_back("kci conditional null rate " + fmt(rate));
    }

    {  // Detector null suite: Fisher combination over two rounds stays calibrated.
        BinaryScmSpec spec;
        spec.lambda = 0;
        int rej = 0;
        for (int rep = 0; rep < reps; ++rep) {
            DetectorConfig cfg;
            cfg.seed = 81'001 + static_cast<std::uint64_t>(rep);
            rej += detect(sample_binary_scm(spec, 500, 4, cfg.seed), cfg).rejected;
        }
        const double rate = static_cast<double>(rej) / reps;
        if (std::fabs(rate - 0.05) > band)
            problems.push_back("detector null rate " + fmt(rate));
    }

    out.pass = problems.empty();
    out.detail = out.pass ? "all null rejection rates within 3 SE of alpha over 500 reps"
                          : problems.front() + " (+" + std::to_string(problems.size() - 1) +
                                " more)";
    return out;
}

// ---------------------------------------------------------------- criterion 9
std::string cli_path;

int run_cli(const std::string& args, const std::string& stdout_path) {
    const std::string cmd = cli_path + " " + args + " > " + stdout_path + " 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome criterion9() {
    Outcome out;
    if (cli_path.empty()) {
        out.pass = false;
        out.detail = "no --cli path given";
        return out;
    }
    const fs::path dir = fs::temp_directory_path() / "confdet_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::vector<std::string> problems;
    auto expect_same = [&](const fs::path& a, const fs::path& b, const std::string& what) {
        if (slurp(a) != slurp(b)) problems.push_back(what + " differs between runs");
    };

    for (const std::string model : {"binary", "gauss"}) {
        const auto f1 = dir / (model + "_1.csv");
        const auto f2 = dir / (model + "_2.csv");
        const std::string args = "simulate --model " + model +
                                 " --lambda 2 --envs 40 --n-per-env 3 --seed 99 --out ";
        run_cli(args + f1.string(), (dir / "sim.log").string());
        run_cli(args + f2.string(), (dir / "sim.log").string());
        expect_same(f1, f2, model + " simulate output");
    }

    {
        const auto data = dir / "binary_1.csv";
        const auto j1 = dir / "report1.json";
        const auto j2 = dir / "report2.json";
        const int c1 = run_cli("detect --data " + data.string() + " --k-min 20 --json " +
                                   j1.string(),
                               (dir / "det1.log").string());
        const int c2 = run_cli("detect --data " + data.string() + " --k-min 20 --json " +
                                   j2.string(),
                               (dir / "det2.log").string());
        expect_same(j1, j2, "detect report");
        if (c1 != c2) problems.push_back("detect exit codes differ");
        expect_same(dir / "det1.log", dir / "det2.log", "detect stdout");
    }

    {
        const auto t1 = dir / "tidy1.csv";
        const auto t2 = dir / "tidy2.csv";
        const auto s1 = dir / "sum1.csv";
        const auto s2 = dir / "sum2.csv";
        const std::string args =
            "sweep --kind confounding-grid --lambda 0 --lambda 5 --envs 50 --n-per-env 2 "
            "--reps 3 --seed 7 --workers 3 --no-timing";
        run_cli(args + " --out " + t1.string() + " --summary " + s1.string(),
                (dir / "sweep.log").string());
        run_cli(args + " --out " + t2.string() + " --summary " + s2.string(),
                (dir / "sweep.log").string());
        expect_same(t1, t2, "sweep tidy csv");
        expect_same(s1, s2, "sweep summary csv");
    }

    {  // verify-tables exits 0 and is stable byte-for-byte.
        const int code =
            run_cli("verify-tables --out " + (dir / "tables1").string(), (dir / "vt.log").string());
        run_cli("verify-tables --out " + (dir / "tables2").string(), (dir / "vt.log").string());
        if (code != 0) problems.push_back("verify-tables exited nonzero");
        for (const char* f : {"table1.csv", "table2.csv", "table3.csv", "selection_bias.csv"})
            expect_same(dir / "tables1" / f, dir / "tables2" / f, std::string("tables/") + f);
    }

    out.pass = problems.empty();
    out.detail = out.pass ? "simulate/detect/sweep/verify-tables byte-identical under fixed seeds"
                          : problems.front();
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    bool only_set = false;
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--cli" && i + 1 < argc) {
            cli_path = argv[++i];
        } else if (arg == "--only" && i + 1 < argc) {
            only_set = true;
            only.push_back(std::atoi(argv[++i]));
        }
    }
    auto wanted = [&](int id) {
        return !only_set || std::find(only.begin(), only.end(), id) != only.end();
    };

    if (wanted(1)) run(1, "proof-table reproduction (exact)", criterion1);
    if (wanted(2)) run(2, "type-1 error control at lambda=0", criterion2);
    if (wanted(3)) run(3, "power at strong confounding + monotonicity", criterion3);
    if (wanted(4)) run(4, "jci contrast under outcome-mechanism shifts", criterion4);
    if (wanted(5)) run(5, "faithfulness locus (analytic + monte-carlo)", criterion5);
    if (wanted(6)) run(6, "moment, bias and asymptote oracles", criterion6);
    if (wanted(7)) run(7, "semi-synthetic behavior on a bundled covariate table", criterion7);
    if (wanted(8)) run(8, "calibration suite (500 reps per test + detector)", criterion8);
    if (wanted(9)) run(9, "determinism of simulate/detect/sweep", criterion9);

    if (g_failures > 0) {
        std::cout << g_failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all acceptance criteria passed" << std::endl;
    return 0;
}
