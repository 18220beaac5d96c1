#ifndef LLL_JSON_IO_HPP
#define LLL_JSON_IO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lll/matching.hpp"
#include "lll/rainbow.hpp"
#include "lll/variable_model.hpp"

namespace lll {

inline constexpr const char* kToolVersion = "0.1.0";

/** FNV-1a over the bytes of `text`; used to fingerprint configs in reports. */
uint64_t fnv1a_hash(const std::string& text);

/** An instance file, dispatched on its "kind" field:
      variables — product space: {domains, dists?, flaws:[{name?,vbl,bad}]}
      matchings — perfect matchings: {host:{type,nverts|sizes}, flaws:[{edges}]}
      coloring  — edge-colored K_{2n}: {n, edges:[[u,v,color],...]}
    Colorings on at most 12 vertices are additionally tabulated so the
    exhaustive checkers can run on them; larger ones stay generative-only. */
struct LoadedInstance {
    std::string kind;
    std::string name;
    std::optional<BuiltInstance> matchings;
    std::optional<BuiltVariableModel> variables;
    std::optional<ColoredGraph> coloring;
    DependencyGraph dep;

    bool enumerable() const { return matchings.has_value() || variables.has_value(); }
    /** Throws capability_error for generative-only instances. */
    const EnumeratedInstance& inst() const;
};

LoadedInstance parse_instance(const nlohmann::json& j);
LoadedInstance load_instance(const std::string& path);

nlohmann::json coloring_to_json(const ColoredGraph& g);

/** Provenance block every CLI report carries: tool version, the FNV-1a hash
    of the configuration line, the RNG name, and the seeds in play. */
nlohmann::json report_header(const std::string& command, const std::string& config_text,
                             const std::vector<uint64_t>& seeds);

nlohmann::json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);
void write_text_file(const std::string& path, const std::string& text);

/** Accepts integers, "num/den" / decimal strings, and JSON floats. */
Rat rat_from_json(const nlohmann::json& v);

} // namespace lll

#endif
