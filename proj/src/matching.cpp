#include "lll/matching.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace lll {

EdgeList matching_edges(const Matching& m) {
    EdgeList out;
    for (int u = 0; u < static_cast<int>(m.size()); ++u)
        if (m[static_cast<size_t>(u)] > u) out.emplace_back(u, m[static_cast<size_t>(u)]);
    return out; // already sorted by construction
}

Matching matching_from_edges(int nverts, const EdgeList& edges) {
    Matching m(static_cast<size_t>(nverts), -1);
    for (const Edge& e : edges) {
        if (e.u < 0 || e.v >= nverts) throw input_error("edge endpoint out of range");
        if (m[static_cast<size_t>(e.u)] != -1 || m[static_cast<size_t>(e.v)] != -1)
            throw input_error("edges do not form a matching");
        m[static_cast<size_t>(e.u)] = e.v;
        m[static_cast<size_t>(e.v)] = e.u;
    }
    return m;
}

bool is_matching(const EdgeList& edges) {
    EdgeList dedup = edges;
    std::sort(dedup.begin(), dedup.end());
    dedup.erase(std::unique(dedup.begin(), dedup.end()), dedup.end());
    std::vector<int> seen;
    for (const Edge& e : dedup) {
        seen.push_back(e.u);
        seen.push_back(e.v);
    }
    std::sort(seen.begin(), seen.end());
    return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

HostGraph HostGraph::complete(int nverts) {
    if (nverts <= 0 || nverts % 2) throw input_error("complete host needs a positive even vertex count");
    HostGraph g;
    g.kind_ = Kind::complete;
    g.nverts_ = nverts;
    g.block_.assign(static_cast<size_t>(nverts), 0);
    return g;
}

HostGraph HostGraph::bipartite_blocks(const std::vector<int>& sizes) {
    if (sizes.empty()) throw input_error("block host needs at least one block");
    HostGraph g;
    g.kind_ = Kind::blocks;
    g.sizes_ = sizes;
    for (size_t b = 0; b < sizes.size(); ++b) {
        if (sizes[b] <= 0) throw input_error("block sizes must be positive");
        for (int side = 0; side < 2; ++side)
            for (int i = 0; i < sizes[b]; ++i) {
                g.block_.push_back(static_cast<int>(b));
                g.side_.push_back(side);
            }
    }
    g.nverts_ = static_cast<int>(g.block_.size());
    return g;
}

bool HostGraph::has_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= nverts_ || v >= nverts_ || u == v) return false;
    if (kind_ == Kind::complete) return true;
    return block_[static_cast<size_t>(u)] == block_[static_cast<size_t>(v)] &&
           side_[static_cast<size_t>(u)] != side_[static_cast<size_t>(v)];
}

bool HostGraph::left_side(int v) const {
    if (kind_ != Kind::blocks) throw input_error("left_side on a complete host");
    return side_.at(static_cast<size_t>(v)) == 0;
}

std::string HostGraph::describe() const {
    if (kind_ == Kind::complete) return "K" + std::to_string(nverts_);
    std::string s = "blocks(";
    for (size_t i = 0; i < sizes_.size(); ++i) s += (i ? "," : "") + std::to_string(sizes_[i]);
    return s + ")";
}

EdgeList HostGraph::all_edges() const {
    EdgeList out;
    for (int u = 0; u < nverts_; ++u)
        for (int v = u + 1; v < nverts_; ++v)
            if (has_edge(u, v)) out.emplace_back(u, v);
    return out;
}

namespace {

void enumerate_rec(const HostGraph& g, Matching& m, std::vector<Matching>& out, size_t cap) {
    int u = -1;
    for (int i = 0; i < g.nverts(); ++i)
        if (m[static_cast<size_t>(i)] == -1) {
            u = i;
            break;
        }
    if (u == -1) {
        if (out.size() >= cap) throw capability_error("perfect-matching enumeration cap exceeded");
        out.push_back(m);
        return;
    }
    for (int v = u + 1; v < g.nverts(); ++v) {
        if (m[static_cast<size_t>(v)] != -1 || !g.has_edge(u, v)) continue;
        m[static_cast<size_t>(u)] = v;
        m[static_cast<size_t>(v)] = u;
        enumerate_rec(g, m, out, cap);
        m[static_cast<size_t>(u)] = -1;
        m[static_cast<size_t>(v)] = -1;
    }
}

void validate_perfect(const HostGraph& g, const Matching& sigma) {
    if (static_cast<int>(sigma.size()) != g.nverts()) throw input_error("matching size mismatch");
    for (int u = 0; u < g.nverts(); ++u) {
        int v = sigma[static_cast<size_t>(u)];
        if (v < 0 || v >= g.nverts() || v == u || sigma[static_cast<size_t>(v)] != u || !g.has_edge(u, v))
            throw input_error("not a perfect matching of the host");
    }
}

void validate_flaw_edges(const HostGraph& g, const EdgeList& m) {
    if (m.empty()) throw input_error("empty edge pattern");
    if (!std::is_sorted(m.begin(), m.end())) throw input_error("edge pattern must be sorted");
    if (!is_matching(m)) throw input_error("edge pattern must itself be a matching");
    for (const Edge& e : m)
        if (!g.has_edge(e.u, e.v)) throw input_error("edge pattern uses a non-edge " + e.str());
}

} // namespace

std::vector<Matching> HostGraph::enumerate_perfect_matchings(size_t cap) const {
    Matching m(static_cast<size_t>(nverts_), -1);
    std::vector<Matching> out;
    enumerate_rec(*this, m, out, cap);
    std::sort(out.begin(), out.end(),
              [](const Matching& a, const Matching& b) { return matching_edges(a) < matching_edges(b); });
    return out;
}

Matching psi_step(const HostGraph& g, const Edge& e, const Matching& sigma) {
    validate_perfect(g, sigma);
    if (!g.has_edge(e.u, e.v)) throw input_error("psi_step on a non-edge");
    if (sigma[static_cast<size_t>(e.u)] == e.v) return sigma;
    int up = sigma[static_cast<size_t>(e.u)];
    int vp = sigma[static_cast<size_t>(e.v)];
    if (!g.has_edge(up, vp))
        throw property_violation("host violates the 4-path closure at " + e.str());
    Matching out = sigma;
    out[static_cast<size_t>(e.u)] = e.v;
    out[static_cast<size_t>(e.v)] = e.u;
    out[static_cast<size_t>(up)] = vp;
    out[static_cast<size_t>(vp)] = up;
    return out;
}

Matching hat_psi(const HostGraph& g, const EdgeList& m, const Matching& sigma) {
    validate_flaw_edges(g, m);
    Matching cur = sigma;
    for (const Edge& e : m) cur = psi_step(g, e, cur);
    return cur;
}

Matching swap_pairs(const HostGraph& g, const Matching& sigma, std::pair<int, int> uv,
                    std::pair<int, int> upvp) {
    validate_perfect(g, sigma);
    auto [u, v] = uv;
    auto [up, vp] = upvp;
    if (sigma[static_cast<size_t>(u)] != v) throw input_error("swap: (u,v) is not matched");
    if (sigma[static_cast<size_t>(up)] != vp) throw input_error("swap: (u',v') is not matched");
    if (up == v && vp == u) return sigma; // re-picking the same edge reversed
    if (up == u || vp == v) throw input_error("swap: degenerate pair");
    if (!g.has_edge(u, up) || !g.has_edge(v, vp)) throw input_error("swap leaves the edge set");
    Matching out = sigma;
    out[static_cast<size_t>(u)] = up;
    out[static_cast<size_t>(up)] = u;
    out[static_cast<size_t>(v)] = vp;
    out[static_cast<size_t>(vp)] = v;
    return out;
}

std::vector<std::pair<int, int>> swap_neighbors(const HostGraph& g, const Matching& sigma,
                                                std::pair<int, int> uv) {
    validate_perfect(g, sigma);
    auto [u, v] = uv;
    if (sigma[static_cast<size_t>(u)] != v) throw input_error("swap_neighbors: (u,v) is not matched");
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < g.nverts(); ++a) {
        int b = sigma[static_cast<size_t>(a)];
        if (a == u) continue; // (u,v) itself: swapping with itself is undefined
        if (a == v) {
            out.emplace_back(a, b); // (v,u): the identity re-pick
            continue;
        }
        if (g.has_edge(u, a) && g.has_edge(v, b)) out.emplace_back(a, b);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct ActionWork {
    const HostGraph* g;
    EdgeList edges; // sorted pattern
};

std::vector<std::pair<int, int>> step_choices(const ActionWork& w, const Matching& sigma, size_t i) {
    const Edge& e = w.edges[i];
    auto cand = swap_neighbors(*w.g, sigma, {e.u, e.v});
    std::vector<std::pair<int, int>> out;
    for (auto& p : cand) {
        bool excluded = false;
        for (size_t j = 0; j < i; ++j) {
            const Edge& ej = w.edges[j];
            if ((p.first == ej.u && p.second == ej.v) || (p.first == ej.v && p.second == ej.u)) {
                excluded = true;
                break;
            }
        }
        if (!excluded) out.push_back(p);
    }
    return out;
}

void support_rec(const ActionWork& w, const Matching& sigma, size_t i, const Rat& prob,
                 std::vector<std::pair<Matching, Rat>>& out, size_t cap) {
    if (i == SIZE_MAX || i >= w.edges.size()) { // done: i walked below 0
        if (out.size() >= cap) throw capability_error("action-support enumeration cap exceeded");
        out.emplace_back(sigma, prob);
        return;
    }
    auto choices = step_choices(w, sigma, i);
    if (choices.empty()) throw property_violation("matching resample has no admissible swap");
    Rat share = prob / Rat(static_cast<unsigned long>(choices.size()));
    const Edge& e = w.edges[i];
    for (auto& p : choices)
        support_rec(w, swap_pairs(*w.g, sigma, {e.u, e.v}, p), i == 0 ? SIZE_MAX : i - 1, share, out, cap);
}

} // namespace

Matching sample_matching_action(const HostGraph& g, const EdgeList& m, const Matching& sigma, Rng& rng) {
    validate_flaw_edges(g, m);
    validate_perfect(g, sigma);
    for (const Edge& e : m)
        if (sigma[static_cast<size_t>(e.u)] != e.v) throw input_error("flaw pattern not matched in sigma");
    ActionWork w{&g, m};
    Matching cur = sigma;
    for (size_t i = m.size(); i-- > 0;) {
        auto choices = step_choices(w, cur, i);
        if (choices.empty()) throw property_violation("matching resample has no admissible swap");
        auto pick = choices[static_cast<size_t>(rng.below(choices.size()))];
        cur = swap_pairs(g, cur, {m[i].u, m[i].v}, pick);
    }
    return cur;
}

std::vector<std::pair<Matching, Rat>> matching_action_support(const HostGraph& g, const EdgeList& m,
                                                              const Matching& sigma, size_t cap) {
    validate_flaw_edges(g, m);
    validate_perfect(g, sigma);
    for (const Edge& e : m)
        if (sigma[static_cast<size_t>(e.u)] != e.v) throw input_error("flaw pattern not matched in sigma");
    ActionWork w{&g, m};
    std::vector<std::pair<Matching, Rat>> out;
    support_rec(w, sigma, m.size() - 1, Rat(1), out, cap);
    // distinct choice sequences land on distinct outputs; verify instead of assuming
    std::vector<std::pair<Matching, Rat>> sorted = out;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].first == sorted[i - 1].first)
            throw property_violation("matching resample support has colliding branches");
    return out;
}

bool matching_flaws_related(const EdgeList& a, const EdgeList& b) {
    if (a == b) return true;
    EdgeList u = a;
    u.insert(u.end(), b.begin(), b.end());
    return !is_matching(u);
}

BuiltInstance build_matching_instance(const MatchingInstanceSpec& requested) {
    MatchingInstanceSpec spec = requested;
    // the flaw "all edges matched" is order-free; canonicalize to the sorted
    // order the fold-based oracle is defined on
    for (auto& pat : spec.flaw_patterns) std::sort(pat.begin(), pat.end());
    for (const auto& pat : spec.flaw_patterns) validate_flaw_edges(spec.host, pat);
    for (size_t i = 0; i < spec.flaw_patterns.size(); ++i)
        for (size_t j = i + 1; j < spec.flaw_patterns.size(); ++j)
            if (spec.flaw_patterns[i] == spec.flaw_patterns[j])
                throw input_error("duplicate flaw pattern");

    BuiltInstance built;
    built.states = spec.host.enumerate_perfect_matchings(spec.cap);
    const size_t ns = built.states.size();
    const int nf = static_cast<int>(spec.flaw_patterns.size());
    std::map<Matching, int> id;
    for (size_t s = 0; s < ns; ++s) id[built.states[s]] = static_cast<int>(s);

    EnumeratedInstance& inst = built.inst;
    inst.name = "matchings(" + spec.host.describe() + ")";
    inst.exact = true;
    inst.omega.assign(ns, Rat(1) / Rat(static_cast<unsigned long>(ns)));
    inst.omega_init = inst.omega;
    inst.present.assign(ns, FlawSet(static_cast<uint32_t>(nf)));
    inst.actions.assign(static_cast<size_t>(nf), {});
    for (size_t s = 0; s < ns; ++s) {
        std::ostringstream label;
        label << "{";
        EdgeList es = matching_edges(built.states[s]);
        for (size_t i = 0; i < es.size(); ++i) label << (i ? "," : "") << es[i].str();
        label << "}";
        inst.state_names.push_back(label.str());
    }
    for (int f = 0; f < nf; ++f) {
        const EdgeList& pat = spec.flaw_patterns[static_cast<size_t>(f)];
        std::ostringstream label;
        label << "f{";
        for (size_t i = 0; i < pat.size(); ++i) label << (i ? "," : "") << pat[i].str();
        label << "}";
        inst.flaw_names.push_back(label.str());
        inst.actions[static_cast<size_t>(f)].assign(ns, {});
        for (size_t s = 0; s < ns; ++s) {
            const Matching& sigma = built.states[s];
            bool holds = true;
            for (const Edge& e : pat)
                if (sigma[static_cast<size_t>(e.u)] != e.v) {
                    holds = false;
                    break;
                }
            if (!holds) continue;
            inst.present[s].set(f);
            auto support = matching_action_support(spec.host, pat, sigma, spec.cap);
            auto& row = inst.actions[static_cast<size_t>(f)][s];
            for (auto& [tm, p] : support) row.emplace_back(id.at(tm), p);
            std::sort(row.begin(), row.end());
        }
    }
    inst.validate();

    built.dep = DependencyGraph(static_cast<uint32_t>(nf));
    for (int i = 0; i < nf; ++i)
        for (int j = i; j < nf; ++j)
            if (matching_flaws_related(spec.flaw_patterns[static_cast<size_t>(i)],
                                       spec.flaw_patterns[static_cast<size_t>(j)]))
                built.dep.add_edge(i, j);
    return built;
}

Matching sample_uniform_matching(const HostGraph& g, Rng& rng) {
    Matching m(static_cast<size_t>(g.nverts()), -1);
    for (int u = 0; u < g.nverts(); ++u) {
        if (m[static_cast<size_t>(u)] != -1) continue;
        std::vector<int> free;
        for (int v = u + 1; v < g.nverts(); ++v)
            if (m[static_cast<size_t>(v)] == -1 && g.has_edge(u, v)) free.push_back(v);
        if (free.empty()) throw property_violation("host has no perfect matching completion");
        int v = free[static_cast<size_t>(rng.below(free.size()))];
        m[static_cast<size_t>(u)] = v;
        m[static_cast<size_t>(v)] = u;
    }
    return m;
}

Rat count_perfect_matchings(const HostGraph& g) {
    mpz_class total = 1;
    if (g.kind() == HostGraph::Kind::complete) {
        for (int k = g.nverts() - 1; k > 0; k -= 2) total *= k;
    } else {
        for (int mside : g.block_sizes()) {
            mpz_class fact;
            mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(mside));
            total *= fact;
        }
    }
    return Rat(total);
}

} // namespace lll
