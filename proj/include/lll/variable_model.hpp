#ifndef LLL_VARIABLE_MODEL_HPP
#define LLL_VARIABLE_MODEL_HPP

#include <functional>
#include <string>
#include <vector>

#include "lll/depgraph.hpp"
#include "lll/instance.hpp"
#include "lll/rational.hpp"

namespace lll {

/** A flaw over an assignment space: it holds exactly when the restriction of
    the assignment to `vbl` equals one of the listed bad tuples. */
struct VariableFlaw {
    std::vector<int> vbl;               // distinct variable indices
    std::vector<std::vector<int>> bad;  // each tuple has vbl.size() values
    std::string name;
};

struct VariableModelSpec {
    std::vector<int> domains;            // per-variable domain sizes
    std::vector<std::vector<Rat>> dists; // per-variable distributions; empty = uniform
    std::vector<VariableFlaw> flaws;
    size_t cap = kDefaultEnumCap;
};

struct BuiltVariableModel {
    EnumeratedInstance inst;
    DependencyGraph dep;                  // shared-variable relation, loops on every flaw
    std::vector<std::vector<int>> states; // id -> assignment (lexicographic ids)
};

/** Tabulates the product space: resampling a flaw redraws exactly its
    variables from their product distribution. */
BuiltVariableModel build_variable_model(const VariableModelSpec& spec);

/** Same, but flaws given as predicates with a declared variable scope. The
    predicate is tabulated over the scope; if its value ever depends on a
    variable outside the scope, that is reported as an input_error. */
BuiltVariableModel build_variable_model_from_predicates(
    const std::vector<int>& domains, const std::vector<std::vector<Rat>>& dists,
    const std::vector<std::pair<std::vector<int>, std::function<bool(const std::vector<int>&)>>>& flaws,
    size_t cap = kDefaultEnumCap);

} // namespace lll

#endif
