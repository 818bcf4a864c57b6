#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "confdet/ci_tests.hpp"
#include "confdet/dataset.hpp"

namespace confdet {

enum class CiTestKind { GTest, PartialCorr, Permutation, Kci };

const char* to_string(CiTestKind k);
CiTestKind ci_test_from_string(const std::string& name);

enum class TheoremMode {
    WithCovariates,  // one test per round: t_j _||_ y_i | {t_i, x_i, x_j}; p may be 0
    TwoVariable      // both t_j _||_ y_i | t_i and t_j _||_ y_i | y_j; round p = max
};

const char* to_string(TheoremMode m);
TheoremMode theorem_mode_from_string(const std::string& name);

struct DetectorConfig {
    double alpha = 0.05;
    int k_min = 25;
    CiTestKind test = CiTestKind::GTest;
    TheoremMode theorem = TheoremMode::WithCovariates;
    std::optional<int> max_rounds;
    std::uint64_t seed = 0;  // drives permutation replicate streams
    int n_perm = 199;
    KciConfig kci;

    void validate() const;
};

/// Round i pairs observation indices (2i-1, 2i) across every environment
/// that still has that many observations.
struct PairedRound {
    int index = 0;                 // 1-based round number
    int obs_first = 0;             // 0-based index of observation 2i-1 (the "j" row)
    int obs_second = 0;            // 0-based index of observation 2i (the "i" row)
    std::vector<int> env_indices;  // into sorted_env_indices order
};

/// Fisher's method: z = -2 sum ln p, global p = P(chi2_{2L} > z).
/// p-values are clamped to [1e-300, 1] before the logs.
std::pair<double, double> fisher_combine(const std::vector<double>& p_values);

/// Rounds stop before the first i whose participating-environment count
/// falls below k_min; an optional cap truncates further.
std::vector<PairedRound> build_rounds(const MultiEnvDataset& data, int k_min,
                                      std::optional<int> max_rounds = {});

struct DetectionReport {
    std::vector<double> round_p_values;
    std::vector<int> round_env_counts;
    double fisher_statistic = 0.0;
    double global_p = 1.0;
    bool rejected = false;
    int rounds_used = 0;
    double alpha = 0.05;
    std::string test_name;
};

DetectionReport detect(const MultiEnvDataset& data, const DetectorConfig& config);

/// JCI-style baseline: pools all observations and tests Y _||_ E | T with E
/// as a categorical environment label. Valid only when E acts as an
/// instrument; kept for comparison sweeps.
CiTestResult jci_baseline(const MultiEnvDataset& data, const DetectorConfig& config);

}  // namespace confdet
