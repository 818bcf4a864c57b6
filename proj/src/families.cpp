#include "confdet/families.hpp"

#include <sstream>

#include "confdet/errors.hpp"

namespace confdet {

namespace {

constexpr std::array<EdgeState, 3> kStates = {EdgeState::Forward, EdgeState::Backward,
                                              EdgeState::Absent};

void add_edge(std::vector<std::pair<std::string, std::string>>& edges, const std::string& a,
              const std::string& b, EdgeState s) {
    if (s == EdgeState::Forward)
        edges.emplace_back(a, b);
    else if (s == EdgeState::Backward)
        edges.emplace_back(b, a);
}

bool acyclic(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<int> indeg(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> ch(static_cast<std::size_t>(n));
    for (auto [a, b] : edges) {
        ch[static_cast<std::size_t>(a)].push_back(b);
        ++indeg[static_cast<std::size_t>(b)];
    }
    std::vector<int> stack;
    for (int v = 0; v < n; ++v)
        if (indeg[static_cast<std::size_t>(v)] == 0) stack.push_back(v);
    int seen = 0;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        ++seen;
        for (int c : ch[static_cast<std::size_t>(v)])
            if (--indeg[static_cast<std::size_t>(c)] == 0) stack.push_back(c);
    }
    return seen == n;
}

// Index mapping T=0, Y=1, X=2, U=3 for the quick acyclicity pre-check.
std::vector<std::pair<int, int>> pattern_index_edges(const EdgePattern& p) {
    std::vector<std::pair<int, int>> e = {{2, 0}, {2, 1}};
    auto put = [&e](int a, int b, EdgeState s) {
        if (s == EdgeState::Forward) e.emplace_back(a, b);
        if (s == EdgeState::Backward) e.emplace_back(b, a);
    };
    put(0, 1, p.t_y);
    put(3, 0, p.u_t);
    put(3, 1, p.u_y);
    put(3, 2, p.u_x);
    return e;
}

bool reaches(int from, int to, int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> ch(static_cast<std::size_t>(n));
    for (auto [a, b] : edges) ch[static_cast<std::size_t>(a)].push_back(b);
    std::vector<char> vis(static_cast<std::size_t>(n), 0);
    std::vector<int> stack = {from};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int c : ch[static_cast<std::size_t>(v)]) {
            if (c == to) return true;
            if (!vis[static_cast<std::size_t>(c)]) {
                vis[static_cast<std::size_t>(c)] = 1;
                stack.push_back(c);
            }
        }
    }
    return false;
}

const char* state_str(EdgeState s) {
    switch (s) {
        case EdgeState::Forward: return "->";
        case EdgeState::Backward: return "<-";
        default: return "";
    }
}

const char* verdict_str(bool dsep) { return dsep ? "dsep" : "dep"; }
const char* flag_str(bool b) { return b ? "yes" : "no"; }

DSepQuery adjusted_query() {
    return DSepQuery{{copy_j_name("T")}, {copy_i_name("Y")},
                     {copy_i_name("T"), copy_i_name("X"), copy_j_name("X")}};
}

}  // namespace

Dag pattern_to_dag(const EdgePattern& p) {
    std::vector<std::pair<std::string, std::string>> edges;
    add_edge(edges, "X", "T", p.x_t);
    add_edge(edges, "X", "Y", p.x_y);
    add_edge(edges, "T", "Y", p.t_y);
    add_edge(edges, "U", "T", p.u_t);
    add_edge(edges, "U", "Y", p.u_y);
    add_edge(edges, "U", "X", p.u_x);
    return Dag({"T", "Y", "X", "U"}, edges, {"U"});
}

Dag pattern_to_dag(const TwoVarPattern& p) {
    std::vector<std::pair<std::string, std::string>> edges;
    add_edge(edges, "T", "Y", p.t_y);
    add_edge(edges, "U", "T", p.u_t);
    add_edge(edges, "U", "Y", p.u_y);
    return Dag({"T", "Y", "U"}, edges, {"U"});
}

std::vector<EdgePattern> adjusted_family_patterns() {
    std::vector<EdgePattern> out;
    for (EdgeState ty : kStates)
        for (EdgeState ut : kStates)
            for (EdgeState uy : kStates)
                for (EdgeState ux : kStates) {
                    EdgePattern p;
                    p.t_y = ty;
                    p.u_t = ut;
                    p.u_y = uy;
                    p.u_x = ux;
                    const auto e = pattern_index_edges(p);
                    if (!acyclic(4, e)) continue;
                    if (reaches(1, 0, 4, e)) continue;  // Y must not be an ancestor of T
                    out.push_back(p);
                }
    return out;
}

std::vector<Dag> enumerate_adjusted_family() {
    std::vector<Dag> out;
    for (const auto& p : adjusted_family_patterns()) out.push_back(pattern_to_dag(p));
    return out;
}

std::vector<TwoVarPattern> two_var_family_patterns() {
    std::vector<TwoVarPattern> out;
    for (EdgeState ty : kStates)
        for (EdgeState ut : kStates)
            for (EdgeState uy : kStates) {
                TwoVarPattern p{ty, ut, uy};
                std::vector<std::pair<int, int>> e;  // T=0, Y=1, U=2
                auto put = [&e](int a, int b, EdgeState s) {
                    if (s == EdgeState::Forward) e.emplace_back(a, b);
                    if (s == EdgeState::Backward) e.emplace_back(b, a);
                };
                put(0, 1, p.t_y);
                put(2, 0, p.u_t);
                put(2, 1, p.u_y);
                if (!acyclic(3, e)) continue;
                out.push_back(p);
            }
    return out;
}

std::vector<Dag> enumerate_two_var_family() {
    std::vector<Dag> out;
    for (const auto& p : two_var_family_patterns()) out.push_back(pattern_to_dag(p));
    return out;
}

std::vector<AdjustedFamilyRow> verify_adjusted_family_table() {
    std::vector<AdjustedFamilyRow> rows;
    const auto query = adjusted_query();
    int id = 0;
    for (const auto& p : adjusted_family_patterns()) {
        AdjustedFamilyRow row;
        row.id = ++id;
        row.pattern = p;
        row.confounder = p.confounder();
        row.dsep = d_separated(unroll(pattern_to_dag(p)), query);
        rows.push_back(row);
    }
    return rows;
}

std::vector<TwoVarFamilyRow> verify_two_var_family_table() {
    std::vector<TwoVarFamilyRow> rows;
    const DSepQuery q1{{copy_j_name("T")}, {copy_i_name("Y")}, {copy_i_name("T")}};
    const DSepQuery q2{{copy_j_name("T")}, {copy_i_name("Y")}, {copy_j_name("Y")}};
    int id = 0;
    for (const auto& p : two_var_family_patterns()) {
        TwoVarFamilyRow row;
        row.id = ++id;
        row.pattern = p;
        row.confounder = p.confounder();
        const Dag base = pattern_to_dag(p);
        row.y_ancestor_of_t = base.is_ancestor("Y", "T");
        const auto g = unroll(base);
        row.dsep_given_ti = d_separated(g, q1);
        row.dsep_given_yj = d_separated(g, q2);
        rows.push_back(row);
    }
    return rows;
}

const std::vector<std::vector<std::string>>& degeneracy_subsets() {
    static const std::vector<std::vector<std::string>> subsets = [] {
        const std::array<std::string, 4> mech = {mechanism_name("T"), mechanism_name("Y"),
                                                 mechanism_name("X"), mechanism_name("U")};
        // Size-major, then lexicographic in the (T, Y, X, U) slot order, the
        // column order of the printed degeneracy table.
        std::vector<std::vector<std::string>> out;
        for (int a = 0; a < 4; ++a) out.push_back({mech[static_cast<std::size_t>(a)]});
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                out.push_back({mech[static_cast<std::size_t>(a)], mech[static_cast<std::size_t>(b)]});
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                for (int c = b + 1; c < 4; ++c)
                    out.push_back({mech[static_cast<std::size_t>(a)],
                                   mech[static_cast<std::size_t>(b)],
                                   mech[static_cast<std::size_t>(c)]});
        out.push_back({mech[0], mech[1], mech[2], mech[3]});
        return out;
    }();
    return subsets;
}

std::vector<DegenerateRow> verify_degenerate_table() {
    std::vector<DegenerateRow> rows;
    const auto query = adjusted_query();
    const auto& subsets = degeneracy_subsets();
    int id = 0;
    for (const auto& p : adjusted_family_patterns()) {
        DegenerateRow row;
        row.id = ++id;
        row.pattern = p;
        row.confounder = p.confounder();
        const Dag base = pattern_to_dag(p);
        for (std::size_t c = 0; c < subsets.size(); ++c) {
            std::set<std::string> deg(subsets[c].begin(), subsets[c].end());
            row.dsep[c] = d_separated(unroll(base, deg), query);
        }
        rows.push_back(row);
    }
    return rows;
}

SelectionBiasCheck check_selection_bias_example() {
    const DSepQuery query{{copy_j_name("T")}, {copy_i_name("Y")},
                          {copy_i_name("T"), copy_i_name("C"), copy_j_name("C")}};
    auto verdict = [&query](bool with_u, bool theta_c_degenerate) {
        std::vector<std::string> vars = {"T", "Y", "C"};
        std::vector<std::pair<std::string, std::string>> edges = {
            {"T", "Y"}, {"T", "C"}, {"Y", "C"}};
        std::set<std::string> latent;
        if (with_u) {
            vars.push_back("U");
            latent.insert("U");
            edges.emplace_back("U", "T");
            edges.emplace_back("U", "Y");
        }
        std::set<std::string> degenerate = {mechanism_name("Y")};
        if (theta_c_degenerate) degenerate.insert(mechanism_name("C"));
        return d_separated(unroll(Dag(vars, edges, latent), degenerate), query);
    };
    SelectionBiasCheck out;
    out.random_no_confounder = verdict(false, false);
    out.degenerate_no_confounder = verdict(false, true);
    out.random_with_confounder = verdict(true, false);
    out.degenerate_with_confounder = verdict(true, true);
    return out;
}

std::string adjusted_family_table_csv() {
    std::ostringstream os;
    os << "id,X-T,X-Y,T-Y,U-T,U-Y,U-X,dsep,confounder\n";
    for (const auto& r : verify_adjusted_family_table()) {
        const auto& p = r.pattern;
        os << r.id << ',' << state_str(p.x_t) << ',' << state_str(p.x_y) << ','
           << state_str(p.t_y) << ',' << state_str(p.u_t) << ',' << state_str(p.u_y) << ','
           << state_str(p.u_x) << ',' << verdict_str(r.dsep) << ',' << flag_str(r.confounder)
           << '\n';
    }
    return os.str();
}

std::string two_var_family_table_csv() {
    std::ostringstream os;
    os << "id,T-Y,U-T,U-Y,dsep_cond_Ti,dsep_cond_Yj,confounder,Y_ancestor_of_T\n";
    for (const auto& r : verify_two_var_family_table()) {
        const auto& p = r.pattern;
        os << r.id << ',' << state_str(p.t_y) << ',' << state_str(p.u_t) << ','
           << state_str(p.u_y) << ',' << verdict_str(r.dsep_given_ti) << ','
           << verdict_str(r.dsep_given_yj) << ',' << flag_str(r.confounder) << ','
           << flag_str(r.y_ancestor_of_t) << '\n';
    }
    return os.str();
}

std::string degenerate_table_csv() {
    std::ostringstream os;
    os << "id,X-T,X-Y,T-Y,U-T,U-Y,U-X,confounder";
    for (const auto& subset : degeneracy_subsets()) {
        os << ",deg";
        for (const auto& m : subset) os << '_' << m.substr(m.find('_') + 1);
    }
    os << '\n';
    for (const auto& r : verify_degenerate_table()) {
        const auto& p = r.pattern;
        os << r.id << ',' << state_str(p.x_t) << ',' << state_str(p.x_y) << ','
           << state_str(p.t_y) << ',' << state_str(p.u_t) << ',' << state_str(p.u_y) << ','
           << state_str(p.u_x) << ',' << flag_str(r.confounder);
        for (bool v : r.dsep) os << ',' << verdict_str(v);
        os << '\n';
    }
    return os.str();
}

std::string selection_bias_csv() {
    const auto c = check_selection_bias_example();
    std::ostringstream os;
    os << "scenario,theta_C,dsep\n";
    os << "no_confounder,random," << verdict_str(c.random_no_confounder) << '\n';
    os << "no_confounder,degenerate," << verdict_str(c.degenerate_no_confounder) << '\n';
    os << "confounder,random," << verdict_str(c.random_with_confounder) << '\n';
    os << "confounder,degenerate," << verdict_str(c.degenerate_with_confounder) << '\n';
    return os.str();
}

std::vector<std::string> diff_against_golden(const std::string& computed, const std::string& golden,
                                             const std::string& table_name) {
    auto split = [](const std::string& s) {
        std::vector<std::string> lines;
        std::istringstream is(s);
        std::string line;
        while (std::getline(is, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) lines.push_back(line);
        }
        return lines;
    };
    const auto got = split(computed);
    const auto want = split(golden);
    std::vector<std::string> diffs;
    const std::size_t n = std::max(got.size(), want.size());
    for (std::size_t i = 0; i < n; ++i) {
        const std::string* g = i < got.size() ? &got[i] : nullptr;
        const std::string* w = i < want.size() ? &want[i] : nullptr;
        if (g && w && *g == *w) continue;
        std::ostringstream os;
        os << table_name << " line " << (i + 1) << ": computed \"" << (g ? *g : "<missing>")
           << "\" vs golden \"" << (w ? *w : "<missing>") << "\"";
        diffs.push_back(os.str());
    }
    return diffs;
}

}  // namespace confdet
