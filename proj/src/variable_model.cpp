#include "lll/variable_model.hpp"

#include <algorithm>
#include <map>

namespace lll {

namespace {

std::vector<std::vector<int>> enumerate_assignments(const std::vector<int>& domains, size_t cap) {
    size_t total = 1;
    for (int d : domains) {
        if (d <= 0) throw input_error("variable domains must be positive");
        if (total > cap / static_cast<size_t>(d) + 1) throw capability_error("assignment space exceeds cap");
        total *= static_cast<size_t>(d);
    }
    if (total > cap) throw capability_error("assignment space exceeds cap");
    std::vector<std::vector<int>> out;
    out.reserve(total);
    std::vector<int> cur(domains.size(), 0);
    for (;;) {
        out.push_back(cur);
        size_t i = domains.size();
        while (i > 0) {
            --i;
            if (++cur[i] < domains[i]) break;
            cur[i] = 0;
            if (i == 0) return out;
        }
        if (domains.empty()) return out;
    }
}

void validate_dists(const std::vector<int>& domains, std::vector<std::vector<Rat>>& dists) {
    if (dists.empty()) {
        for (int d : domains) dists.emplace_back(static_cast<size_t>(d), Rat(1) / Rat(static_cast<unsigned long>(d)));
        return;
    }
    if (dists.size() != domains.size()) throw input_error("one distribution per variable required");
    for (size_t i = 0; i < dists.size(); ++i) {
        if (static_cast<int>(dists[i].size()) != domains[i])
            throw input_error("distribution arity mismatch at variable " + std::to_string(i));
        Rat sum(0);
        for (const Rat& p : dists[i]) {
            if (sgn(p) <= 0) throw input_error("variable distributions must be positive");
            sum += p;
        }
        if (sum != 1) throw input_error("variable distribution does not sum to 1");
    }
}

} // namespace

BuiltVariableModel build_variable_model(const VariableModelSpec& spec_in) {
    VariableModelSpec spec = spec_in;
    validate_dists(spec.domains, spec.dists);
    const int nv = static_cast<int>(spec.domains.size());
    const int nf = static_cast<int>(spec.flaws.size());
    if (nv == 0) throw input_error("variable model needs at least one variable");

    for (auto& fl : spec.flaws) {
        if (fl.vbl.empty()) throw input_error("flaw scope must be non-empty");
        std::vector<int> sorted = fl.vbl;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw input_error("flaw scope repeats a variable");
        for (int v : fl.vbl)
            if (v < 0 || v >= nv) throw input_error("flaw scope out of range");
        if (fl.bad.empty()) throw input_error("flaw with empty bad-tuple list holds nowhere");
        for (auto& tup : fl.bad) {
            if (tup.size() != fl.vbl.size()) throw input_error("bad tuple arity mismatch");
            for (size_t i = 0; i < tup.size(); ++i)
                if (tup[i] < 0 || tup[i] >= spec.domains[static_cast<size_t>(fl.vbl[i])])
                    throw input_error("bad tuple value out of domain");
        }
        std::sort(fl.bad.begin(), fl.bad.end());
        if (std::adjacent_find(fl.bad.begin(), fl.bad.end()) != fl.bad.end())
            throw input_error("duplicate bad tuple");
    }

    BuiltVariableModel built;
    built.states = enumerate_assignments(spec.domains, spec.cap);
    const size_t ns = built.states.size();
    std::map<std::vector<int>, int> id;
    for (size_t s = 0; s < ns; ++s) id[built.states[s]] = static_cast<int>(s);

    EnumeratedInstance& inst = built.inst;
    inst.name = "variable_model";
    inst.exact = true;
    inst.omega.assign(ns, Rat(1));
    for (size_t s = 0; s < ns; ++s)
        for (int v = 0; v < nv; ++v)
            inst.omega[s] *= spec.dists[static_cast<size_t>(v)][static_cast<size_t>(built.states[s][static_cast<size_t>(v)])];
    inst.omega_init = inst.omega;
    inst.present.assign(ns, FlawSet(static_cast<uint32_t>(nf)));
    inst.actions.assign(static_cast<size_t>(nf), {});
    for (size_t s = 0; s < ns; ++s) {
        std::string label;
        for (size_t v = 0; v < built.states[s].size(); ++v)
            label += (v ? "," : "") + std::to_string(built.states[s][v]);
        inst.state_names.push_back("(" + label + ")");
    }

    for (int f = 0; f < nf; ++f) {
        const VariableFlaw& fl = spec.flaws[static_cast<size_t>(f)];
        inst.flaw_names.push_back(fl.name.empty() ? "f" + std::to_string(f) : fl.name);
        inst.actions[static_cast<size_t>(f)].assign(ns, {});
        // resampling support: every joint value of the scope, product weights
        std::vector<int> scope_domains;
        for (int v : fl.vbl) scope_domains.push_back(spec.domains[static_cast<size_t>(v)]);
        auto scope_values = enumerate_assignments(scope_domains, spec.cap);

        for (size_t s = 0; s < ns; ++s) {
            std::vector<int> restr;
            for (int v : fl.vbl) restr.push_back(built.states[s][static_cast<size_t>(v)]);
            if (!std::binary_search(fl.bad.begin(), fl.bad.end(), restr)) continue;
            inst.present[s].set(f);
            auto& row = inst.actions[static_cast<size_t>(f)][s];
            for (const auto& vals : scope_values) {
                std::vector<int> target = built.states[s];
                Rat p(1);
                for (size_t i = 0; i < fl.vbl.size(); ++i) {
                    target[static_cast<size_t>(fl.vbl[i])] = vals[i];
                    p *= spec.dists[static_cast<size_t>(fl.vbl[i])][static_cast<size_t>(vals[i])];
                }
                row.emplace_back(id.at(target), p);
            }
            std::sort(row.begin(), row.end());
        }
    }
    inst.validate();

    built.dep = DependencyGraph(static_cast<uint32_t>(nf));
    for (int i = 0; i < nf; ++i)
        for (int j = i; j < nf; ++j) {
            const auto& a = spec.flaws[static_cast<size_t>(i)].vbl;
            const auto& b = spec.flaws[static_cast<size_t>(j)].vbl;
            bool share = false;
            for (int v : a)
                if (std::find(b.begin(), b.end(), v) != b.end()) {
                    share = true;
                    break;
                }
            if (share) built.dep.add_edge(i, j);
        }
    return built;
}

BuiltVariableModel build_variable_model_from_predicates(
    const std::vector<int>& domains, const std::vector<std::vector<Rat>>& dists,
    const std::vector<std::pair<std::vector<int>, std::function<bool(const std::vector<int>&)>>>& flaws,
    size_t cap) {
    VariableModelSpec spec;
    spec.domains = domains;
    spec.dists = dists;
    spec.cap = cap;
    auto assignments = enumerate_assignments(domains, cap);
    for (const auto& [vbl, pred] : flaws) {
        VariableFlaw fl;
        fl.vbl = vbl;
        // tabulate over the scope and check the predicate never reads outside it
        std::map<std::vector<int>, bool> by_restriction;
        for (const auto& a : assignments) {
            std::vector<int> restr;
            for (int v : vbl) {
                if (v < 0 || v >= static_cast<int>(domains.size())) throw input_error("flaw scope out of range");
                restr.push_back(a[static_cast<size_t>(v)]);
            }
            bool val = pred(a);
            auto [it, inserted] = by_restriction.emplace(restr, val);
            if (!inserted && it->second != val)
                throw input_error("flaw predicate depends on variables outside its declared scope");
        }
        for (const auto& [restr, val] : by_restriction)
            if (val) fl.bad.push_back(restr);
        if (fl.bad.empty()) throw input_error("flaw predicate holds nowhere");
        spec.flaws.push_back(std::move(fl));
    }
    return build_variable_model(spec);
}

} // namespace lll
