#include "confdet/unroll.hpp"

#include "confdet/errors.hpp"

namespace confdet {

std::string mechanism_name(const std::string& variable) { return "Theta_" + variable; }
std::string copy_i_name(const std::string& variable) { return variable + "_i"; }
std::string copy_j_name(const std::string& variable) { return variable + "_j"; }

UnrolledGraph unroll(const Dag& base, const std::set<std::string>& degenerate,
                     const std::set<std::pair<std::string, std::string>>& mech_dependencies) {
    std::set<std::string> valid_mechs;
    for (const auto& v : base.variables()) valid_mechs.insert(mechanism_name(v));
    for (const auto& d : degenerate)
        if (!valid_mechs.count(d))
            throw UsageError("degenerate set names unknown mechanism: " + d);
    for (const auto& [a, b] : mech_dependencies) {
        if (!valid_mechs.count(a) || !valid_mechs.count(b))
            throw UsageError("mechanism dependence names unknown mechanism: " + a + " ~ " + b);
        if (degenerate.count(a) || degenerate.count(b))
            throw UsageError("mechanism dependence on a degenerate mechanism: " + a + " ~ " + b);
        if (a == b) throw UsageError("mechanism dependence must join two distinct mechanisms");
    }

    std::vector<std::string> vars;
    std::vector<std::pair<std::string, std::string>> edges;
    std::set<std::string> latent;

    for (const auto& v : base.variables()) {
        vars.push_back(copy_i_name(v));
        vars.push_back(copy_j_name(v));
        if (base.is_latent(base.index_of(v))) {
            latent.insert(copy_i_name(v));
            latent.insert(copy_j_name(v));
        }
    }
    for (const auto& from : base.variables())
        for (int c : base.children(base.index_of(from))) {
            const auto& to = base.name(c);
            edges.emplace_back(copy_i_name(from), copy_i_name(to));
            edges.emplace_back(copy_j_name(from), copy_j_name(to));
        }
    for (const auto& v : base.variables()) {
        const auto mech = mechanism_name(v);
        if (degenerate.count(mech)) continue;
        vars.push_back(mech);
        latent.insert(mech);
        edges.emplace_back(mech, copy_i_name(v));
        edges.emplace_back(mech, copy_j_name(v));
    }
    for (const auto& [a, b] : mech_dependencies) {
        const auto dep = "Dep(" + a + "," + b + ")";
        vars.push_back(dep);
        latent.insert(dep);
        edges.emplace_back(dep, a);
        edges.emplace_back(dep, b);
    }

    return UnrolledGraph{Dag(std::move(vars), edges, latent), base.variables(), degenerate};
}

}  // namespace confdet
