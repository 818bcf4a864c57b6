#pragma once

#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace confdet {

/// Directed acyclic graph over named variables. Immutable after
/// construction; construction rejects cycles, self-edges, duplicate edges
/// and edges touching undeclared variables.
class Dag {
public:
    Dag(std::vector<std::string> variables,
        const std::vector<std::pair<std::string, std::string>>& edges,
        const std::set<std::string>& latent = {});

    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& variables() const { return names_; }
    const std::string& name(int v) const { return names_[static_cast<std::size_t>(v)]; }
    bool has_variable(const std::string& name) const { return index_.count(name) > 0; }
    int index_of(const std::string& name) const;  // throws UsageError on unknown name

    const std::vector<int>& parents(int v) const { return parents_[static_cast<std::size_t>(v)]; }
    const std::vector<int>& children(int v) const { return children_[static_cast<std::size_t>(v)]; }
    bool has_edge(const std::string& from, const std::string& to) const;
    bool is_latent(int v) const { return latent_[static_cast<std::size_t>(v)] != 0; }
    int edge_count() const { return n_edges_; }

    /// True iff a directed path `from` ~> `to` exists (a node is not its own
    /// ancestor unless on a cycle, which construction forbids).
    bool is_ancestor(const std::string& from, const std::string& to) const;

    /// Indices in one valid topological order.
    std::vector<int> topological_order() const;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::vector<int>> parents_;
    std::vector<std::vector<int>> children_;
    std::vector<char> latent_;
    int n_edges_ = 0;
};

/// A d-separation query: are all paths between a_set and b_set blocked
/// given cond_set? The three sets must be pairwise disjoint.
struct DSepQuery {
    std::set<std::string> a_set;
    std::set<std::string> b_set;
    std::set<std::string> cond_set;
};

/// Standard d-separation decided by linear-time reachability over
/// (node, entry-direction) states: a path continues through a non-collider
/// not in Z and through a collider whose descendants meet Z.
bool d_separated(const Dag& g, const DSepQuery& q);

inline bool d_separated(const Dag& g, const std::string& a, const std::string& b,
                        const std::set<std::string>& cond) {
    return d_separated(g, DSepQuery{{a}, {b}, cond});
}

}  // namespace confdet
