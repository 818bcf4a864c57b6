#pragma once

#include <array>
#include <string>
#include <vector>

#include "confdet/graph.hpp"
#include "confdet/unroll.hpp"

namespace confdet {

enum class EdgeState { Forward, Backward, Absent };

/// One row of the four-variable family: slots in the fixed order
/// (X-T, X-Y, T-Y, U-T, U-Y, U-X). X-T and X-Y are always Forward and
/// T-Y is never Backward (Y must not be an ancestor of T).
struct EdgePattern {
    EdgeState x_t = EdgeState::Forward;
    EdgeState x_y = EdgeState::Forward;
    EdgeState t_y = EdgeState::Absent;
    EdgeState u_t = EdgeState::Absent;
    EdgeState u_y = EdgeState::Absent;
    EdgeState u_x = EdgeState::Absent;

    bool confounder() const { return u_t == EdgeState::Forward && u_y == EdgeState::Forward; }
};

/// Three-variable (T, Y, U) family slots, order (T-Y, U-T, U-Y).
struct TwoVarPattern {
    EdgeState t_y = EdgeState::Absent;
    EdgeState u_t = EdgeState::Absent;
    EdgeState u_y = EdgeState::Absent;

    bool confounder() const { return u_t == EdgeState::Forward && u_y == EdgeState::Forward; }
};

Dag pattern_to_dag(const EdgePattern& p);
Dag pattern_to_dag(const TwoVarPattern& p);

/// All DAGs over (T, Y, X, U) with X a common cause of T and Y, and Y not
/// an ancestor of T, in deterministic row order; exactly 40. This is the
/// family behind the adjusted (covariate) detection criterion.
std::vector<EdgePattern> adjusted_family_patterns();
std::vector<Dag> enumerate_adjusted_family();

/// All DAGs over (T, Y, U); exactly 25 (only cycles excluded).
std::vector<TwoVarPattern> two_var_family_patterns();
std::vector<Dag> enumerate_two_var_family();

struct AdjustedFamilyRow {
    int id = 0;
    EdgePattern pattern;
    bool dsep = false;        // T_j _||_ Y_i | {T_i, X_i, X_j} in the unrolled graph
    bool confounder = false;  // both U->T and U->Y present
};

/// Re-derives the 40-row d-separation table; dsep must be false exactly on
/// the confounded rows.
std::vector<AdjustedFamilyRow> verify_adjusted_family_table();

struct TwoVarFamilyRow {
    int id = 0;
    TwoVarPattern pattern;
    bool dsep_given_ti = false;  // T_j _||_ Y_i | T_i
    bool dsep_given_yj = false;  // T_j _||_ Y_i | Y_j
    bool confounder = false;
    bool y_ancestor_of_t = false;
};

std::vector<TwoVarFamilyRow> verify_two_var_family_table();

/// The 15 non-empty degeneracy subsets of {Theta_T, Theta_Y, Theta_X,
/// Theta_U}, ordered by size then by the (T, Y, X, U) slot order.
const std::vector<std::vector<std::string>>& degeneracy_subsets();

struct DegenerateRow {
    int id = 0;
    EdgePattern pattern;
    bool confounder = false;
    std::array<bool, 15> dsep{};  // one verdict per degeneracy subset
};

std::vector<DegenerateRow> verify_degenerate_table();

/// Collider/selection scenario: T -> Y, T -> C <- Y with an optional hidden
/// confounder U of (T, Y) and a selection mechanism Theta_C. Evaluates
/// T_j _||_ Y_i | {T_i, C_i, C_j} in the unrolled graph with the minimal
/// heterogeneity the theory needs (Theta_T, and Theta_U when U is present,
/// are the non-degenerate mechanisms besides Theta_C).
struct SelectionBiasCheck {
    bool random_no_confounder = false;      // Theta_C random, U absent
    bool degenerate_no_confounder = false;  // Theta_C constant, U absent
    bool random_with_confounder = false;
    bool degenerate_with_confounder = false;
};

SelectionBiasCheck check_selection_bias_example();

/// CSV renderings, one row per pattern, verdict cells "dsep"/"dep".
std::string adjusted_family_table_csv();
std::string two_var_family_table_csv();
std::string degenerate_table_csv();
std::string selection_bias_csv();

/// Line-by-line comparison against a golden CSV; returns human-readable
/// mismatch descriptions (empty means exact match).
std::vector<std::string> diff_against_golden(const std::string& computed, const std::string& golden,
                                             const std::string& table_name);

}  // namespace confdet
