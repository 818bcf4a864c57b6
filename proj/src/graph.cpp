#include "confdet/graph.hpp"

#include <algorithm>
#include <queue>

#include "confdet/errors.hpp"

namespace confdet {

Dag::Dag(std::vector<std::string> variables,
         const std::vector<std::pair<std::string, std::string>>& edges,
         const std::set<std::string>& latent)
    : names_(std::move(variables)) {
    index_.reserve(names_.size());
    for (int i = 0; i < static_cast<int>(names_.size()); ++i) {
        if (!index_.emplace(names_[static_cast<std::size_t>(i)], i).second)
            throw UsageError("duplicate variable name: " + names_[static_cast<std::size_t>(i)]);
    }
    parents_.resize(names_.size());
    children_.resize(names_.size());
    latent_.assign(names_.size(), 0);
    for (const auto& name : latent) {
        auto it = index_.find(name);
        if (it == index_.end()) throw UsageError("latent flag names unknown variable: " + name);
        latent_[static_cast<std::size_t>(it->second)] = 1;
    }

    std::set<std::pair<int, int>> seen;
    for (const auto& [from, to] : edges) {
        auto fi = index_.find(from);
        auto ti = index_.find(to);
        if (fi == index_.end() || ti == index_.end())
            throw UsageError("edge endpoint not a declared variable: " + from + " -> " + to);
        if (fi->second == ti->second) throw UsageError("self-edge on " + from);
        if (!seen.emplace(fi->second, ti->second).second)
            throw UsageError("duplicate edge " + from + " -> " + to);
        children_[static_cast<std::size_t>(fi->second)].push_back(ti->second);
        parents_[static_cast<std::size_t>(ti->second)].push_back(fi->second);
        ++n_edges_;
    }
    topological_order();  // throws on cycles
}

int Dag::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw UsageError("unknown variable: " + name);
    return it->second;
}

bool Dag::has_edge(const std::string& from, const std::string& to) const {
    const int f = index_of(from);
    const int t = index_of(to);
    const auto& ch = children_[static_cast<std::size_t>(f)];
    return std::find(ch.begin(), ch.end(), t) != ch.end();
}

bool Dag::is_ancestor(const std::string& from, const std::string& to) const {
    const int src = index_of(from);
    const int dst = index_of(to);
    std::vector<char> visited(names_.size(), 0);
    std::queue<int> q;
    q.push(src);
    visited[static_cast<std::size_t>(src)] = 1;
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (int c : children_[static_cast<std::size_t>(v)]) {
            if (c == dst) return true;
            if (!visited[static_cast<std::size_t>(c)]) {
                visited[static_cast<std::size_t>(c)] = 1;
                q.push(c);
            }
        }
    }
    return false;
}

std::vector<int> Dag::topological_order() const {
    std::vector<int> indeg(names_.size(), 0);
    for (std::size_t v = 0; v < names_.size(); ++v)
        indeg[v] = static_cast<int>(parents_[v].size());
    std::queue<int> q;
    for (int v = 0; v < size(); ++v)
        if (indeg[static_cast<std::size_t>(v)] == 0) q.push(v);
    std::vector<int> order;
    order.reserve(names_.size());
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        order.push_back(v);
        for (int c : children_[static_cast<std::size_t>(v)])
            if (--indeg[static_cast<std::size_t>(c)] == 0) q.push(c);
    }
    if (order.size() != names_.size()) throw UsageError("edge set induces a directed cycle");
    return order;
}

namespace {

std::vector<char> membership(const Dag& g, const std::set<std::string>& names) {
    std::vector<char> in(static_cast<std::size_t>(g.size()), 0);
    for (const auto& n : names) in[static_cast<std::size_t>(g.index_of(n))] = 1;
    return in;
}

}  // namespace

bool d_separated(const Dag& g, const DSepQuery& q) {
    for (const auto& n : q.a_set)
        if (q.b_set.count(n) || q.cond_set.count(n))
            throw UsageError("d-separation query sets overlap on " + n);
    for (const auto& n : q.b_set)
        if (q.cond_set.count(n)) throw UsageError("d-separation query sets overlap on " + n);
    if (q.a_set.empty() || q.b_set.empty()) throw UsageError("d-separation query sets must be nonempty");

    const auto in_a = membership(g, q.a_set);
    const auto in_b = membership(g, q.b_set);
    const auto in_z = membership(g, q.cond_set);
    const std::size_t n = static_cast<std::size_t>(g.size());

    // Ancestors of Z (including Z): colliders in this set pass.
    std::vector<char> anc_z(n, 0);
    {
        std::queue<int> q2;
        for (std::size_t v = 0; v < n; ++v)
            if (in_z[v]) {
                anc_z[v] = 1;
                q2.push(static_cast<int>(v));
            }
        while (!q2.empty()) {
            const int v = q2.front();
            q2.pop();
            for (int p : g.parents(v))
                if (!anc_z[static_cast<std::size_t>(p)]) {
                    anc_z[static_cast<std::size_t>(p)] = 1;
                    q2.push(p);
                }
        }
    }

    // Reachability over (node, arrived-via-edge-head?) states.
    // head=true: the last edge pointed into the node (u -> v).
    // head=false: the last edge pointed out of it (we came from a child).
    std::vector<char> seen_head(n, 0), seen_tail(n, 0);
    std::queue<std::pair<int, bool>> frontier;
    auto push = [&](int v, bool head) {
        auto& seen = head ? seen_head : seen_tail;
        if (seen[static_cast<std::size_t>(v)]) return;
        seen[static_cast<std::size_t>(v)] = 1;
        frontier.emplace(v, head);
    };

    for (std::size_t v = 0; v < n; ++v) {
        if (!in_a[v]) continue;
        for (int c : g.children(static_cast<int>(v))) push(c, true);
        for (int p : g.parents(static_cast<int>(v))) push(p, false);
    }

    while (!frontier.empty()) {
        const auto [v, head] = frontier.front();
        frontier.pop();
        if (in_b[static_cast<std::size_t>(v)]) return false;
        const bool conditioned = in_z[static_cast<std::size_t>(v)] != 0;
        if (head) {
            // u -> v; continuing to a child keeps v a non-collider, continuing
            // to a parent makes v a collider.
            if (!conditioned)
                for (int c : g.children(v)) push(c, true);
            if (anc_z[static_cast<std::size_t>(v)])
                for (int p : g.parents(v)) push(p, false);
        } else {
            // v <- came from a child; v is a non-collider either way.
            if (!conditioned) {
                for (int c : g.children(v)) push(c, true);
                for (int p : g.parents(v)) push(p, false);
            }
        }
    }
    return true;
}

}  // namespace confdet
