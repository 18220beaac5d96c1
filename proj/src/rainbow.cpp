#include "lll/rainbow.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lll/engine.hpp"
#include "lll/parallel.hpp"

namespace lll {

int ColoredGraph::color_of(const Edge& e) const {
    auto it = color.find(e);
    if (it == color.end()) throw input_error("edge " + e.str() + " has no color");
    return it->second;
}

int ColoredGraph::color_count() const {
    std::set<int> ids;
    for (const auto& [e, c] : color) ids.insert(c);
    return static_cast<int>(ids.size());
}

std::map<int, EdgeList> ColoredGraph::classes() const {
    std::map<int, EdgeList> out;
    for (const auto& [e, c] : color) out[c].push_back(e);
    return out;
}

namespace {

void validate_coloring(const ColoredGraph& g) {
    if (g.n < 2) throw input_error("coloring needs n >= 2 (at least 4 vertices)");
    const size_t expect = static_cast<size_t>(g.n) * (2 * g.n - 1);
    if (g.color.size() != expect)
        throw input_error("coloring must assign every edge of the complete graph: have " +
                          std::to_string(g.color.size()) + ", need " + std::to_string(expect));
    int qmax = 0;
    std::map<int, int> size;
    for (const auto& [e, c] : g.color) {
        if (e.u < 0 || e.v >= g.nverts()) throw input_error("edge " + e.str() + " out of range");
        qmax = std::max(qmax, ++size[c]);
    }
    if (g.q != qmax)
        throw input_error("declared q=" + std::to_string(g.q) + " but the largest class has " +
                          std::to_string(qmax) + " edges");
}

bool vertex_disjoint(const Edge& a, const Edge& b) {
    return a.u != b.u && a.u != b.v && a.v != b.u && a.v != b.v;
}

} // namespace

ColoredGraph make_colored_graph(int n, const std::vector<std::array<int, 3>>& edges) {
    ColoredGraph g;
    g.n = n;
    for (const auto& t : edges) {
        Edge e(t[0], t[1]);
        if (g.color.count(e)) throw input_error("edge " + e.str() + " colored twice");
        g.color[e] = t[2];
    }
    std::map<int, int> size;
    for (const auto& [e, c] : g.color) g.q = std::max(g.q, ++size[c]);
    validate_coloring(g);
    return g;
}

ColoredGraph random_coloring(int n, int q, uint64_t seed) {
    if (n < 2) throw input_error("random_coloring needs n >= 2");
    if (q < 1) throw input_error("random_coloring needs q >= 1");
    const long long edges = static_cast<long long>(n) * (2 * n - 1);
    if (edges % q != 0)
        throw input_error("q=" + std::to_string(q) + " does not divide the edge count " +
                          std::to_string(edges));
    EdgeList all;
    for (int u = 0; u < 2 * n; ++u)
        for (int v = u + 1; v < 2 * n; ++v) all.emplace_back(u, v);
    Rng rng(seed);
    rng.shuffle(all);
    ColoredGraph g;
    g.n = n;
    g.q = q;
    for (size_t i = 0; i < all.size(); ++i) g.color[all[i]] = static_cast<int>(i / static_cast<size_t>(q));
    validate_coloring(g);
    return g;
}

RainbowInstance::RainbowInstance(ColoredGraph g)
    : g_(std::move(g)), host_(HostGraph::complete(2 * g_.n)) {
    validate_coloring(g_);
    for (const auto& [c, cls] : g_.classes())
        for (size_t i = 0; i < cls.size(); ++i)
            for (size_t j = i + 1; j < cls.size(); ++j)
                if (vertex_disjoint(cls[i], cls[j])) flaws_.push_back({cls[i], cls[j]});
    std::sort(flaws_.begin(), flaws_.end());
    for (size_t f = 0; f < flaws_.size(); ++f)
        id_[{flaws_[f][0], flaws_[f][1]}] = static_cast<int>(f);
}

std::string RainbowInstance::flaw_label(int f) const {
    const EdgeList& m = flaw_edges(f);
    return "{" + m[0].str() + "," + m[1].str() + "}";
}

bool RainbowInstance::flaw_holds(int f, const State& s) const {
    for (const Edge& e : flaw_edges(f))
        if (s.at(static_cast<size_t>(e.u)) != e.v) return false;
    return true;
}

std::vector<int> RainbowInstance::flaws_list(const State& s) const {
    std::map<int, EdgeList> by_color;
    for (const Edge& e : matching_edges(s)) by_color[g_.color_of(e)].push_back(e);
    std::vector<int> out;
    for (const auto& [c, cls] : by_color)
        for (size_t i = 0; i < cls.size(); ++i)
            for (size_t j = i + 1; j < cls.size(); ++j)
                out.push_back(id_.at({cls[i], cls[j]})); // matching edges are disjoint
    std::sort(out.begin(), out.end());
    return out;
}

RainbowInstance::State RainbowInstance::sample_initial(Rng& rng) const {
    return sample_uniform_matching(host_, rng);
}

RainbowInstance::State RainbowInstance::sample_action(int f, const State& s, Rng& rng) const {
    return sample_matching_action(host_, flaw_edges(f), s, rng);
}

bool RainbowInstance::action_contains(int f, const State& from, const State& to) const {
    return flaw_holds(f, from) && hat_psi(host_, flaw_edges(f), to) == from;
}

DependencyGraph RainbowInstance::dependency() const {
    DependencyGraph dep(static_cast<uint32_t>(flaws_.size()));
    std::vector<std::vector<int>> at_vertex(static_cast<size_t>(host_.nverts()));
    for (size_t f = 0; f < flaws_.size(); ++f) {
        dep.add_edge(static_cast<int>(f), static_cast<int>(f));
        for (const Edge& e : flaws_[f]) {
            at_vertex[static_cast<size_t>(e.u)].push_back(static_cast<int>(f));
            at_vertex[static_cast<size_t>(e.v)].push_back(static_cast<int>(f));
        }
    }
    for (const auto& here : at_vertex)
        for (size_t i = 0; i < here.size(); ++i)
            for (size_t j = i + 1; j < here.size(); ++j) {
                int a = here[i], b = here[j];
                if (a != b && !dep.adjacent(a, b) &&
                    matching_flaws_related(flaws_[static_cast<size_t>(a)],
                                           flaws_[static_cast<size_t>(b)]))
                    dep.add_edge(a, b);
            }
    return dep;
}

RainbowParams compute_params(const ColoredGraph& g) {
    validate_coloring(g);
    RainbowParams p;
    p.n = g.n;
    p.q = g.q;
    p.gamma = static_cast<double>(g.q) / g.n;
    const long n2 = 2L * g.n;
    p.a_f = (n2 - 3) * (n2 - 1);
    p.mu = rat(3, 4L * g.n * g.n);
    for (const auto& [c, cls] : g.classes())
        for (size_t i = 0; i < cls.size(); ++i)
            for (size_t j = i + 1; j < cls.size(); ++j)
                if (vertex_disjoint(cls[i], cls[j])) ++p.flaw_count;
    const Rat grow = Rat(1) + Rat(n2 - 1) * Rat(g.q - 1) * p.mu;
    p.theta = rat_pow(grow, 4) / (Rat(p.a_f) * p.mu);
    p.certified = p.theta < 1;
    if (p.certified) {
        const double log_inv = -rat_log(p.theta);
        p.t_seq = static_cast<double>(p.flaw_count) * std::log1p(to_double(p.mu)) / log_inv;
        const double weight = static_cast<double>(p.flaw_count) * to_double(p.mu);
        p.t_par = weight > 1.0 ? std::log(weight) / log_inv : 0.0;
    }
    return p;
}

ExperimentStats run_rainbow_experiment(const ColoredGraph& g, size_t trials, uint64_t seed,
                                       const std::string& strategy_spec,
                                       const ExperimentOptions& opt) {
    if (trials == 0) throw input_error("experiment needs at least one trial");
    ExperimentStats stats;
    stats.params = compute_params(g);
    stats.rounds_mode = opt.rounds_mode;
    if (!stats.params.certified && !opt.force)
        throw capability_error("no convergence certificate (theta >= 1); pass force to run anyway");

    const RainbowInstance inst(g);
    const DependencyGraph dep = inst.dependency();
    const auto proto = make_strategy(strategy_spec, dep);

    Rng master(seed);
    std::vector<uint64_t> seeds(trials);
    for (size_t i = 0; i < trials; ++i) seeds[i] = master.split(i).seed();

    stats.rows.resize(trials);
    parallel_for(trials, opt.jobs, [&](size_t i) {
        auto strat = proto->clone();
        TrialRow row;
        row.trial = i;
        row.seed = seeds[i];
        row.strategy = strat->name();
        Matching final_state;
        if (opt.rounds_mode) {
            ParallelOptions popt;
            popt.max_rounds = opt.max_rounds;
            popt.max_steps = opt.max_steps;
            popt.record = false;
            auto out = run_parallel(inst, dep, *strat, seeds[i], popt);
            row.steps = out.steps;
            row.rounds = out.rounds.size();
            row.terminated = out.terminated;
            final_state = out.final_state;
        } else {
            RunOptions ropt;
            ropt.max_steps = opt.max_steps;
            ropt.record = false;
            auto out = run_sequential(inst, *strat, seeds[i], ropt);
            row.steps = out.steps;
            row.terminated = out.terminated;
            final_state = out.final_state;
        }
        if (row.terminated) {
            std::set<int> colors;
            for (const Edge& e : matching_edges(final_state))
                if (!colors.insert(inst.graph().color_of(e)).second)
                    throw property_violation("terminating trial left a repeated color in the matching");
        }
        stats.rows[i] = std::move(row);
    });

    double step_sum = 0.0, round_sum = 0.0;
    for (const TrialRow& row : stats.rows) {
        step_sum += static_cast<double>(row.steps);
        round_sum += static_cast<double>(row.rounds);
        stats.max_steps = std::max(stats.max_steps, row.steps);
        stats.max_rounds = std::max(stats.max_rounds, row.rounds);
        stats.all_terminated &= row.terminated;
    }
    stats.mean_steps = step_sum / static_cast<double>(trials);
    stats.mean_rounds = round_sum / static_cast<double>(trials);

    const double t_ref = opt.rounds_mode ? stats.params.t_par : stats.params.t_seq;
    const double theta = to_double(stats.params.theta);
    for (int r = 0; r <= opt.tail_range; ++r) {
        TailEntry entry;
        entry.r = r;
        entry.bound = std::pow(theta, r);
        size_t hits = 0;
        for (const TrialRow& row : stats.rows) {
            const double metric =
                static_cast<double>(opt.rounds_mode ? row.rounds : row.steps);
            if (metric >= t_ref + r) ++hits;
        }
        entry.empirical = static_cast<double>(hits) / static_cast<double>(trials);
        stats.tail.push_back(entry);
    }
    return stats;
}

BuiltInstance tabulate_coloring(const ColoredGraph& g, size_t cap) {
    RainbowInstance ri(g);
    MatchingInstanceSpec spec;
    spec.host = HostGraph::complete(g.nverts());
    for (int f = 0; f < ri.flaw_count(); ++f) spec.flaw_patterns.push_back(ri.flaw_edges(f));
    spec.cap = cap;
    BuiltInstance built = build_matching_instance(spec);
    built.inst.name = "coloring-K" + std::to_string(g.nverts());
    return built;
}

std::string trial_rows_csv(const std::vector<TrialRow>& rows) {
    std::string out = "trial,seed,strategy,steps,rounds,terminated\n";
    for (const TrialRow& row : rows) {
        out += std::to_string(row.trial);
        out += ',';
        out += std::to_string(row.seed);
        out += ',';
        out += row.strategy;
        out += ',';
        out += std::to_string(row.steps);
        out += ',';
        out += std::to_string(row.rounds);
        out += ',';
        out += row.terminated ? "1" : "0";
        out += '\n';
    }
    return out;
}

} // namespace lll
