#pragma once

#include <string>
#include <vector>

#include "confdet/sample_matrix.hpp"

namespace confdet {

/// One environment's observation block. Covariates are column-major:
/// x_cols[c][row].
struct EnvBlock {
    std::string env_id;
    std::vector<double> t;
    std::vector<double> y;
    std::vector<std::vector<double>> x_cols;

    int n_obs() const { return static_cast<int>(t.size()); }
};

/// Per-environment observation blocks with shared column kinds. Block order
/// is the ingestion order; consumers that need a canonical order sort by
/// env_id themselves.
struct MultiEnvDataset {
    std::vector<EnvBlock> envs;
    ColumnKind t_kind = ColumnKind::Continuous;
    ColumnKind y_kind = ColumnKind::Continuous;
    std::vector<ColumnKind> x_kinds;

    int n_envs() const { return static_cast<int>(envs.size()); }
    int n_covariates() const { return static_cast<int>(x_kinds.size()); }
    int max_obs() const;
    void validate() const;  // lengths, unique ids, consistent covariate count
};

/// Indices of envs in canonical order: numeric when every env_id parses as an
/// integer, lexicographic otherwise.
std::vector<int> sorted_env_indices(const MultiEnvDataset& ds);

}  // namespace confdet
