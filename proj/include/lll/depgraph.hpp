#ifndef LLL_DEPGRAPH_HPP
#define LLL_DEPGRAPH_HPP

#include <cstdint>
#include <vector>

#include "lll/errors.hpp"
#include "lll/flawset.hpp"

namespace lll {

constexpr size_t kDefaultEnumCap = 100000;

/** Symmetric dependency relation on flaws. Self-loops are allowed and stored
    on the diagonal; they mark flaws whose resampling may fail to eradicate
    them, but they never make a set dependent on itself. */
class DependencyGraph {
public:
    DependencyGraph() = default;
    explicit DependencyGraph(uint32_t n) : n_(n), adj_(n, FlawSet(n)) {}

    uint32_t size() const { return n_; }

    void add_edge(int f, int g) {
        adj_.at(static_cast<size_t>(f)).set(g);
        adj_.at(static_cast<size_t>(g)).set(f);
    }
    void remove_edge(int f, int g) {
        adj_.at(static_cast<size_t>(f)).reset(g);
        adj_.at(static_cast<size_t>(g)).reset(f);
    }

    bool adjacent(int f, int g) const { return adj_.at(static_cast<size_t>(f)).test(g); }
    bool loop(int f) const { return adjacent(f, f); }

    /** f and g are "related" when adjacent or equal (loops irrelevant). */
    bool related(int f, int g) const { return f == g || adjacent(f, g); }

    size_t edge_count() const {
        size_t c = 0;
        for (uint32_t f = 0; f < n_; ++f) {
            c += static_cast<size_t>(adj_[f].count());
            if (loop(static_cast<int>(f))) ++c; // count loops once, not half
        }
        return c / 2;
    }

    /** Neighbourhood of f; with plus=true, f itself is always included. */
    FlawSet gamma(int f, bool plus) const {
        FlawSet s = adj_.at(static_cast<size_t>(f));
        if (plus) s.set(f);
        return s;
    }

    FlawSet gamma(const FlawSet& set, bool plus) const {
        FlawSet out(n_);
        set.for_each([&](int f) { out |= gamma(f, plus); });
        return out;
    }

    /** Pairwise non-adjacency; diagonal loops are ignored. */
    bool is_independent(const FlawSet& set) const {
        bool ok = true;
        set.for_each([&](int f) {
            if (!ok) return;
            FlawSet hits = adj_[static_cast<size_t>(f)] & set;
            hits.reset(f);
            if (hits.any()) ok = false;
        });
        return ok;
    }

    /** All independent subsets of `within` (the empty set included), visited in
        lexicographic DFS order. Throws capability_error past `cap` results. */
    template <class F>
    void for_each_independent_subset(const FlawSet& within, size_t cap, F&& fn) const {
        std::vector<int> elems = within.to_vector();
        FlawSet chosen(n_);
        size_t emitted = 0;
        visit(elems, 0, chosen, cap, emitted, fn);
    }

    std::vector<FlawSet> independent_subsets(const FlawSet& within, size_t cap = kDefaultEnumCap) const {
        std::vector<FlawSet> out;
        for_each_independent_subset(within, cap, [&](const FlawSet& s) { out.push_back(s); });
        return out;
    }

    FlawSet all_flaws() const {
        FlawSet s(n_);
        for (uint32_t f = 0; f < n_; ++f) s.set(static_cast<int>(f));
        return s;
    }

private:
    template <class F>
    void visit(const std::vector<int>& elems, size_t i, FlawSet& chosen, size_t cap, size_t& emitted,
               F&& fn) const {
        if (i == elems.size()) {
            if (++emitted > cap) throw capability_error("independent-subset enumeration cap exceeded");
            fn(const_cast<const FlawSet&>(chosen));
            return;
        }
        int f = elems[i];
        // branch 1: skip f
        visit(elems, i + 1, chosen, cap, emitted, fn);
        // branch 2: take f if it stays independent
        FlawSet hits = adj_[static_cast<size_t>(f)] & chosen;
        hits.reset(f);
        if (hits.none()) {
            chosen.set(f);
            visit(elems, i + 1, chosen, cap, emitted, fn);
            chosen.reset(f);
        }
    }

    uint32_t n_ = 0;
    std::vector<FlawSet> adj_;
};

} // namespace lll

#endif
