#include "lll/json_io.hpp"

#include <fstream>
#include <sstream>

namespace lll {

using nlohmann::json;

uint64_t fnv1a_hash(const std::string& text) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

Rat rat_from_json(const json& v) {
    if (v.is_number_integer()) return rat_from_int64(v.get<long long>());
    if (v.is_number_unsigned()) return rat_from_int64(static_cast<long long>(v.get<unsigned long long>()));
    if (v.is_number_float()) return rat_from_double(v.get<double>());
    if (v.is_string()) return rat_parse(v.get<std::string>());
    throw input_error("expected a rational (integer, float, or \"num/den\" string), got " + v.dump());
}

namespace {

const json& need(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw input_error(std::string("missing field \"") + key + "\"");
    return *it;
}

LoadedInstance parse_variables(const json& j) {
    VariableModelSpec spec;
    for (const auto& d : need(j, "domains")) spec.domains.push_back(d.get<int>());
    if (j.contains("dists")) {
        for (const auto& row : j["dists"]) {
            std::vector<Rat> dist;
            for (const auto& v : row) dist.push_back(rat_from_json(v));
            spec.dists.push_back(std::move(dist));
        }
    }
    for (const auto& fj : need(j, "flaws")) {
        VariableFlaw f;
        for (const auto& v : need(fj, "vbl")) f.vbl.push_back(v.get<int>());
        for (const auto& tuple : need(fj, "bad")) {
            std::vector<int> t;
            for (const auto& v : tuple) t.push_back(v.get<int>());
            f.bad.push_back(std::move(t));
        }
        if (fj.contains("name")) f.name = fj["name"].get<std::string>();
        spec.flaws.push_back(std::move(f));
    }
    LoadedInstance out;
    out.kind = "variables";
    out.variables = build_variable_model(spec);
    out.dep = out.variables->dep;
    return out;
}

LoadedInstance parse_matchings(const json& j) {
    const json& host = need(j, "host");
    MatchingInstanceSpec spec;
    const std::string type = need(host, "type").get<std::string>();
    if (type == "complete") {
        spec.host = HostGraph::complete(need(host, "nverts").get<int>());
    } else if (type == "blocks") {
        std::vector<int> sizes;
        for (const auto& s : need(host, "sizes")) sizes.push_back(s.get<int>());
        spec.host = HostGraph::bipartite_blocks(sizes);
    } else {
        throw input_error("host type must be \"complete\" or \"blocks\", got \"" + type + "\"");
    }
    for (const auto& fj : need(j, "flaws")) {
        EdgeList pat;
        for (const auto& e : need(fj, "edges")) pat.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        std::sort(pat.begin(), pat.end());
        spec.flaw_patterns.push_back(std::move(pat));
    }
    LoadedInstance out;
    out.kind = "matchings";
    out.matchings = build_matching_instance(spec);
    out.dep = out.matchings->dep;
    return out;
}

LoadedInstance parse_coloring(const json& j) {
    std::vector<std::array<int, 3>> triples;
    for (const auto& e : need(j, "edges"))
        triples.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()});
    ColoredGraph g = make_colored_graph(need(j, "n").get<int>(), triples);
    if (j.contains("q") && j["q"].get<int>() != g.q)
        throw input_error("declared q=" + j["q"].dump() + " but the coloring has q=" +
                          std::to_string(g.q));
    LoadedInstance out;
    out.kind = "coloring";
    out.coloring = g;
    if (g.nverts() <= 12) {
        out.matchings = tabulate_coloring(g);
        out.dep = out.matchings->dep;
    } else {
        out.dep = RainbowInstance(g).dependency();
    }
    return out;
}

} // namespace

const EnumeratedInstance& LoadedInstance::inst() const {
    if (matchings) return matchings->inst;
    if (variables) return variables->inst;
    throw capability_error("instance is generative-only (a large coloring); exhaustive checks need "
                           "a tabulated state space");
}

LoadedInstance parse_instance(const json& j) {
    const std::string kind = need(j, "kind").get<std::string>();
    LoadedInstance out;
    if (kind == "variables")
        out = parse_variables(j);
    else if (kind == "matchings")
        out = parse_matchings(j);
    else if (kind == "coloring")
        out = parse_coloring(j);
    else
        throw input_error("unknown instance kind \"" + kind +
                          "\" (expected variables | matchings | coloring)");
    if (j.contains("name")) {
        out.name = j["name"].get<std::string>();
        if (out.matchings) out.matchings->inst.name = out.name;
        if (out.variables) out.variables->inst.name = out.name;
    } else if (out.matchings) {
        out.name = out.matchings->inst.name;
    } else if (out.variables) {
        out.name = out.variables->inst.name;
    }
    return out;
}

LoadedInstance load_instance(const std::string& path) {
    return parse_instance(load_json_file(path));
}

json coloring_to_json(const ColoredGraph& g) {
    json edges = json::array();
    for (const auto& [e, c] : g.color) edges.push_back(json::array({e.u, e.v, c}));
    return json{{"kind", "coloring"}, {"n", g.n}, {"q", g.q}, {"edges", std::move(edges)}};
}

json report_header(const std::string& command, const std::string& config_text,
                   const std::vector<uint64_t>& seeds) {
    std::ostringstream hash;
    hash << std::hex << fnv1a_hash(config_text);
    json h{{"tool", "lll"},
           {"version", kToolVersion},
           {"command", command},
           {"config", config_text},
           {"config_hash", hash.str()},
           {"rng", Rng::name()}};
    h["seeds"] = seeds;
    return h;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw input_error("bad JSON in " + path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw input_error("failed writing " + path);
}

} // namespace lll
