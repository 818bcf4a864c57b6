#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "confdet/graph.hpp"

namespace confdet {

/// Mechanism node name for a base variable ("T" -> "Theta_T").
std::string mechanism_name(const std::string& variable);

/// Copy-i / copy-j node names ("T" -> "T_i" / "T_j").
std::string copy_i_name(const std::string& variable);
std::string copy_j_name(const std::string& variable);

/// Two-observation unrolling of the mechanism-augmented graph: each base
/// variable gets copies V_i and V_j whose within-copy edges mirror the base
/// edges, plus a latent mechanism node Theta_V with one edge into each copy.
/// Mechanisms listed in `degenerate` are constants and omitted entirely.
/// A declared mechanism dependence (Theta_A, Theta_B) is realized as a fresh
/// latent common parent of the two mechanism nodes, which keeps the whole
/// structure a DAG.
struct UnrolledGraph {
    Dag graph;                           // the expanded two-copy DAG
    std::vector<std::string> base_vars;  // base variable order
    std::set<std::string> degenerate;    // omitted mechanisms (by mechanism name)
};

UnrolledGraph unroll(const Dag& base, const std::set<std::string>& degenerate = {},
                     const std::set<std::pair<std::string, std::string>>& mech_dependencies = {});

inline bool d_separated(const UnrolledGraph& g, const DSepQuery& q) {
    return d_separated(g.graph, q);
}

}  // namespace confdet
