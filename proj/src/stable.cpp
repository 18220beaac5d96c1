#include "lll/stable.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace lll {

namespace {

int rank_of(const std::vector<int>& order, int f) {
    if (order.empty()) return f;
    if (f < 0 || static_cast<size_t>(f) >= order.size())
        throw input_error("flaw outside the priority order");
    return order[static_cast<size_t>(f)];
}

} // namespace

PartitionResult partition_stable(const DependencyGraph& dep, const Word& word) {
    PartitionResult res;
    for (int f : word)
        if (f < 0 || static_cast<uint32_t>(f) >= dep.size())
            throw input_error("flaw index out of range");
    if (word.empty()) {
        res.ok = true;
        return res;
    }
    std::vector<std::vector<int>> segs;
    segs.push_back({word[0]});
    for (size_t i = 1; i < word.size(); ++i) {
        int f = word[i];
        bool related = false;
        for (int g : segs.back()) related |= dep.related(g, f);
        if (related) {
            segs.push_back({f});
            continue;
        }
        if (segs.size() >= 2) { // joins the segment: previous segment must cover f
            bool covered = false;
            for (int g : segs[segs.size() - 2]) covered |= dep.related(g, f);
            if (!covered) {
                res.fail_index = i + 1;
                return res;
            }
        }
        segs.back().push_back(f);
    }
    res.ok = true;
    res.segments = std::move(segs);
    return res;
}

bool is_pi_stable(const DependencyGraph& dep, const std::vector<int>& order, const Word& word) {
    PartitionResult part = partition_stable(dep, word);
    if (!part.ok) return false;
    for (const auto& seg : part.segments)
        for (size_t i = 1; i < seg.size(); ++i)
            if (rank_of(order, seg[i - 1]) >= rank_of(order, seg[i])) return false;
    return true;
}

bool word_realizable(const EnumeratedInstance& inst, const Word& word) {
    std::vector<char> reach(inst.state_count(), 1);
    for (int f : word) {
        if (f < 0 || f >= inst.flaw_count()) throw input_error("flaw index out of range");
        std::vector<char> next(inst.state_count(), 0);
        bool any = false;
        for (size_t s = 0; s < inst.state_count(); ++s) {
            if (!reach[s] || !inst.flaw_holds(f, static_cast<int>(s))) continue;
            for (const auto& [s2, p] : inst.action(f, static_cast<int>(s))) {
                next[static_cast<size_t>(s2)] = 1;
                any = true;
            }
        }
        if (!any) return false;
        reach = std::move(next);
    }
    return true;
}

bool word_has_walk_witness(const EnumeratedInstance& inst, const Word& word) {
    return word_realizable(inst, word) || word_realizable(inst, reversed(word));
}

std::vector<Word> enumerate_stab_pi(const EnumeratedInstance* witness, const DependencyGraph& dep,
                                    const std::vector<int>& order, const std::vector<int>& root,
                                    size_t t, size_t max_len, size_t cap) {
    std::vector<Word> out;
    FlawSet rootset(dep.size());
    for (int f : root) rootset.set(f);
    if (!dep.is_independent(rootset)) return out;

    auto sorted_seg = [&](const FlawSet& s) {
        std::vector<int> v = s.to_vector();
        std::sort(v.begin(), v.end(),
                  [&](int a, int b) { return rank_of(order, a) < rank_of(order, b); });
        return v;
    };
    Word cur;
    auto record = [&]() {
        if (witness && !word_has_walk_witness(*witness, cur)) return;
        if (out.size() >= cap) throw capability_error("sorted-stable-word enumeration exceeded the cap");
        out.push_back(cur);
    };

    if (rootset.none()) { // only the empty word has an empty first segment
        if (t == 0) record();
        return out;
    }
    for (int f : sorted_seg(rootset)) cur.push_back(f);
    if (cur.size() > max_len) return out;

    std::function<void(const FlawSet&)> extend = [&](const FlawSet& last) {
        if (cur.size() >= t) record();
        if (cur.size() >= max_len) return;
        FlawSet pool = dep.gamma(last, true);
        dep.for_each_independent_subset(pool, cap, [&](const FlawSet& seg) {
            if (seg.none()) return;
            if (cur.size() + static_cast<size_t>(seg.count()) > max_len) return;
            size_t base = cur.size();
            for (int f : sorted_seg(seg)) cur.push_back(f);
            extend(seg);
            cur.resize(base);
        });
    };
    extend(rootset);
    return out;
}

std::vector<std::vector<std::vector<int>>> enumerate_strongly_stable(const DependencyGraph& dep,
                                                                     const std::vector<int>& root,
                                                                     size_t t, size_t max_size,
                                                                     size_t cap) {
    std::vector<std::vector<std::vector<int>>> out;
    FlawSet rootset(dep.size());
    for (int f : root) rootset.set(f);
    if (!dep.is_independent(rootset)) return out;

    std::vector<std::vector<int>> cur{rootset.to_vector()};
    size_t total = static_cast<size_t>(rootset.count());
    auto record = [&]() {
        if (out.size() >= cap) throw capability_error("stable-sequence enumeration exceeded the cap");
        out.push_back(cur);
    };
    std::function<void(const FlawSet&)> extend = [&](const FlawSet& last) {
        if (total >= t) record();
        if (total >= max_size) return;
        FlawSet pool = dep.gamma(last, false); // open neighborhood
        dep.for_each_independent_subset(pool, cap, [&](const FlawSet& seg) {
            if (seg.none()) return;
            size_t k = static_cast<size_t>(seg.count());
            if (total + k > max_size) return;
            cur.push_back(seg.to_vector());
            total += k;
            extend(seg);
            total -= k;
            cur.pop_back();
        });
    };
    extend(rootset);
    return out;
}

StabCountingReport verify_stab_counting(const EnumeratedInstance* witness, const DependencyGraph& dep,
                                        const std::vector<int>& order, const LllParams& params,
                                        const std::vector<int>& root, size_t t, size_t max_len,
                                        bool strong, size_t cap) {
    if (params.lambda.size() != dep.size() || params.weights.size() != dep.size())
        throw input_error("certificate vectors do not match the flaw count");
    for (int f : root)
        if (f < 0 || static_cast<size_t>(f) >= dep.size())
            throw input_error("flaw index out of range");
    StabCountingReport rep;
    rep.root = root;
    rep.t = t;
    rep.max_len = max_len;
    rep.strong = strong;

    Rat mu_root(1);
    if (params.mode == LllParams::Mode::shearer) {
        ShearerTable table = shearer_q(dep, params.weights, cap);
        if (sgn(table.q_empty()) <= 0)
            throw input_error("weights lie outside the admissible region (empty-set sum not positive)");
        FlawSet rs(dep.size());
        for (int f : root) rs.set(f);
        mu_root = table.q(rs) / table.q_empty();
    } else {
        for (int f : root) mu_root *= params.weights[static_cast<size_t>(f)];
    }
    rep.bound = mu_root * rat_pow(params.theta, t);

    Rat sum(0);
    if (strong) {
        auto seqs = enumerate_strongly_stable(dep, root, t, max_len, cap);
        rep.enumerated = seqs.size();
        for (const auto& phi : seqs) {
            Rat lam(1);
            for (const auto& seg : phi)
                for (int f : seg) lam *= params.lambda[static_cast<size_t>(f)];
            sum += lam;
        }
    } else {
        auto words = enumerate_stab_pi(witness, dep, order, root, t, max_len, cap);
        rep.enumerated = words.size();
        for (const auto& w : words) sum += lambda_of_word(w, params.lambda);
    }
    rep.partial_sum = sum;
    rep.ok = sum <= rep.bound;
    rep.tail_bound =
        to_double(mu_root) * std::pow(to_double(params.theta), static_cast<double>(max_len + 1));
    return rep;
}

NamedWord name_word(const Word& word) {
    std::map<int, int> seen;
    NamedWord out;
    out.reserve(word.size());
    for (int f : word) out.push_back({f, ++seen[f]});
    return out;
}

Word flatten(const NamedWord& named) {
    Word out;
    out.reserve(named.size());
    for (const auto& nf : named) out.push_back(nf.flaw);
    return out;
}

WalkDag build_walk_dag(const DependencyGraph& dep, const Word& word, std::optional<int> anchor) {
    WalkDag dag;
    dag.nodes = name_word(word);
    size_t n = word.size();
    dag.succ.assign(n, {});
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (dep.related(word[i], word[j])) dag.succ[i].push_back(static_cast<int>(j));
    dag.kept.assign(n, 0);
    dag.depth.assign(n, 0);
    if (anchor) {
        int pos = -1;
        for (size_t i = 0; i < n; ++i)
            if (word[i] == *anchor) pos = static_cast<int>(i);
        if (pos < 0) throw input_error("anchor flaw does not occur in the walk");
        dag.anchor_pos = pos;
        dag.kept[static_cast<size_t>(pos)] = 1;
        dag.depth[static_cast<size_t>(pos)] = 1;
        for (int i = pos - 1; i >= 0; --i) {
            int best = 0;
            for (int j : dag.succ[static_cast<size_t>(i)])
                if (dag.kept[static_cast<size_t>(j)])
                    best = std::max(best, dag.depth[static_cast<size_t>(j)]);
            if (best > 0) {
                dag.kept[static_cast<size_t>(i)] = 1;
                dag.depth[static_cast<size_t>(i)] = best + 1;
            }
        }
    } else {
        for (int i = static_cast<int>(n) - 1; i >= 0; --i) {
            int best = 0;
            for (int j : dag.succ[static_cast<size_t>(i)])
                best = std::max(best, dag.depth[static_cast<size_t>(j)]);
            dag.kept[static_cast<size_t>(i)] = 1;
            dag.depth[static_cast<size_t>(i)] = best + 1;
        }
    }
    for (size_t i = 0; i < n; ++i) dag.max_depth = std::max(dag.max_depth, dag.depth[i]);
    return dag;
}

namespace {

NamedWord layered_word(const std::vector<int>& order, const Word& word, const WalkDag& dag) {
    NamedWord out;
    for (int r = dag.max_depth; r >= 1; --r) {
        std::vector<int> layer;
        for (size_t i = 0; i < word.size(); ++i)
            if (dag.kept[i] && dag.depth[i] == r) layer.push_back(static_cast<int>(i));
        std::sort(layer.begin(), layer.end(), [&](int a, int b) {
            return rank_of(order, word[static_cast<size_t>(a)]) >
                   rank_of(order, word[static_cast<size_t>(b)]);
        });
        for (int i : layer) out.push_back(dag.nodes[static_cast<size_t>(i)]);
    }
    return out;
}

} // namespace

NamedWord stab_of_walk(const DependencyGraph& dep, const std::vector<int>& order, const Word& word,
                       std::optional<int> anchor) {
    WalkDag dag = build_walk_dag(dep, word, anchor);
    return layered_word(order, word, dag);
}

size_t longest_chain(const DependencyGraph& dep, const Word& word) {
    if (word.empty()) return 0;
    WalkDag dag = build_walk_dag(dep, word, std::nullopt);
    return static_cast<size_t>(dag.max_depth);
}

size_t rightmost_swappable(const DependencyGraph& dep, const std::vector<int>& order, const Word& word,
                           std::optional<int> anchor) {
    if (word.size() < 2) return 0;
    WalkDag dag = build_walk_dag(dep, word, anchor);
    NamedWord stab = layered_word(order, word, dag);
    std::map<std::pair<int, int>, int> stab_pos;
    for (size_t i = 0; i < stab.size(); ++i) stab_pos[{stab[i].flaw, stab[i].occurrence}] = static_cast<int>(i);
    for (size_t i = word.size() - 1; i >= 1; --i) {
        size_t a = i - 1, b = i;
        if (dep.related(word[a], word[b])) continue;
        if (!dag.kept[a] && dag.kept[b]) return i;
        if (dag.kept[a] && dag.kept[b]) {
            int pa = stab_pos.at({dag.nodes[a].flaw, dag.nodes[a].occurrence});
            int pb = stab_pos.at({dag.nodes[b].flaw, dag.nodes[b].occurrence});
            if (pa > pb) return i;
        }
    }
    return 0;
}

void apply_walk_swap(const EnumeratedInstance& inst, const DependencyGraph& dep, Walk& tau, size_t pos) {
    if (pos + 1 >= tau.steps.size()) throw input_error("swap position out of range");
    int f = tau.steps[pos].first;
    int g = tau.steps[pos + 1].first;
    if (dep.related(f, g)) throw input_error("cannot swap related flaws");
    int before = pos == 0 ? tau.start : tau.steps[pos - 1].second;
    int after = tau.steps[pos + 1].second;
    std::optional<int> mid;
    try {
        mid = inst.atomic_preimage(f, after);
    } catch (const property_violation&) {
        throw capability_error("swap undefined: the trailing flaw has multiple sources for its final state");
    }
    if (!mid) throw capability_error("swap undefined: the trailing flaw has no source for its final state");
    if (!inst.flaw_holds(g, before) || !inst.action_contains(g, before, *mid))
        throw property_violation("swap produced an invalid leading step");
    if (!inst.flaw_holds(f, *mid) || !inst.action_contains(f, *mid, after))
        throw property_violation("swap produced an invalid trailing step");
    tau.steps[pos] = {g, *mid};
    tau.steps[pos + 1] = {f, after};
}

namespace {

/** Shared rewriting core: sorts `w` into its sorted stable form, reporting
    each adjacent swap through `do_swap(left_pos)` before updating the word. */
template <class SwapFn>
Word canonical_sort(const DependencyGraph& dep, const std::vector<int>& order, Word w,
                    std::vector<size_t>& trace, SwapFn&& do_swap) {
    auto swap_at = [&](size_t p) {
        do_swap(p);
        std::swap(w[p], w[p + 1]);
        trace.push_back(p);
    };
    // move each flaw left to the rightmost segment of the stable prefix
    // that contains something related to it
    for (size_t i = 0; i < w.size(); ++i) {
        PartitionResult part = partition_stable(dep, Word(w.begin(), w.begin() + static_cast<long>(i)));
        if (!part.ok) throw property_violation("canonicalization lost prefix stability");
        size_t s = part.segments.size();
        if (s == 0) continue;
        int rel = -1;
        std::vector<size_t> seg_end(s, 0);
        size_t acc = 0;
        for (size_t k = 0; k < s; ++k) {
            acc += part.segments[k].size();
            seg_end[k] = acc;
            for (int g : part.segments[k])
                if (dep.related(g, w[i])) rel = static_cast<int>(k);
        }
        if (rel == static_cast<int>(s) - 1) continue; // opens a new segment in place
        size_t target = rel < 0 ? 0 : seg_end[static_cast<size_t>(rel)];
        for (size_t p = i; p > target; --p) swap_at(p - 1);
    }
    // sort every segment in increasing priority order
    PartitionResult part = partition_stable(dep, w);
    if (!part.ok) throw property_violation("canonicalization produced an unstable word");
    size_t base = 0;
    for (const auto& seg : part.segments) {
        for (size_t a = base + 1; a < base + seg.size(); ++a)
            for (size_t p = a; p > base && rank_of(order, w[p - 1]) > rank_of(order, w[p]); --p)
                swap_at(p - 1);
        base += seg.size();
    }
    return w;
}

} // namespace

CanonWordResult forward_canonicalize_word(const DependencyGraph& dep, const std::vector<int>& order,
                                          Word word) {
    CanonWordResult res;
    res.word = canonical_sort(dep, order, std::move(word), res.swaps, [](size_t) {});
    return res;
}

CanonWalkResult forward_canonicalize_walk(const EnumeratedInstance& inst, const DependencyGraph& dep,
                                          const std::vector<int>& order, Walk tau) {
    CanonWalkResult res;
    res.walk = std::move(tau);
    canonical_sort(dep, order, res.walk.word(), res.swaps,
                   [&](size_t p) { apply_walk_swap(inst, dep, res.walk, p); });
    return res;
}

BackwardAudit backward_canonicalize_set(const EnumeratedInstance& inst, const DependencyGraph& dep,
                                        const std::vector<int>& order, std::vector<Walk> walks,
                                        std::optional<int> anchor, size_t max_rounds) {
    size_t n = walks.size();
    if (anchor) {
        for (size_t i = 0; i < n; ++i) {
            bool has = false;
            for (const auto& st : walks[i].steps) has |= (st.first == *anchor);
            if (!has)
                throw input_error("invalid walk set: walk " + std::to_string(i) +
                                  " does not contain the anchor flaw");
        }
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            const Walk& a = walks[i];
            const Walk& b = walks[j];
            if (a.start != b.start) continue;
            size_t m = std::min(a.steps.size(), b.steps.size());
            size_t k = 0;
            while (k < m && a.steps[k] == b.steps[k]) ++k;
            if (k == m) {
                if (a.steps.size() == b.steps.size())
                    throw input_error("invalid walk set: walks " + std::to_string(i) + " and " +
                                      std::to_string(j) + " are identical");
                throw input_error("invalid walk set: walk " + std::to_string(i) + " is a prefix of walk " +
                                  std::to_string(j));
            }
            if (a.steps[k].first != b.steps[k].first)
                throw input_error("invalid walk set: walks " + std::to_string(i) + " and " +
                                  std::to_string(j) + " pick different flaws after a common history");
        }

    BackwardAudit audit;
    for (;;) {
        size_t k = 0;
        std::vector<size_t> ks(n, 0);
        for (size_t i = 0; i < n; ++i) {
            ks[i] = rightmost_swappable(dep, order, walks[i].word(), anchor);
            k = std::max(k, ks[i]);
        }
        if (k == 0) break;
        if (++audit.rounds > max_rounds)
            throw capability_error("synchronized swapping exceeded the round budget");
        for (size_t i = 0; i < n; ++i)
            if (ks[i] == k) {
                apply_walk_swap(inst, dep, walks[i], k - 1);
                ++audit.swap_count;
            }
    }

    audit.injective = std::set<Walk>(walks.begin(), walks.end()).size() == n;
    audit.prefix_ok = true;
    audit.anchored_ok = true;
    std::map<Word, std::vector<size_t>> groups; // flattened canonical word -> walk ids
    for (size_t i = 0; i < n; ++i) {
        Word w = walks[i].word();
        NamedWord named = name_word(w);
        NamedWord stab = stab_of_walk(dep, order, w, anchor);
        bool prefix = stab.size() <= named.size() &&
                      std::equal(stab.begin(), stab.end(), named.begin());
        audit.prefix_ok = audit.prefix_ok && prefix;
        Word rev = reversed(flatten(stab));
        bool sorted_ok = is_pi_stable(dep, order, rev);
        if (anchor) {
            PartitionResult part = partition_stable(dep, rev);
            sorted_ok = sorted_ok && part.ok && !part.segments.empty() &&
                        part.segments.front() == std::vector<int>{*anchor};
        }
        audit.anchored_ok = audit.anchored_ok && sorted_ok;
        groups[flatten(stab)].push_back(i);
    }
    audit.groups_prefix_free = true;
    for (const auto& [w, ids] : groups)
        for (size_t x : ids)
            for (size_t y : ids) {
                if (x == y) continue;
                const Walk& a = walks[x];
                const Walk& b = walks[y];
                if (a.start != b.start || a.steps.size() >= b.steps.size()) continue;
                if (std::equal(a.steps.begin(), a.steps.end(), b.steps.begin()))
                    audit.groups_prefix_free = false;
            }
    audit.outputs = std::move(walks);
    return audit;
}

BadSet enumerate_bad(const EnumeratedInstance& inst, const Strategy& strat, size_t t, size_t cap) {
    if (!strat.deterministic())
        throw input_error("exhaustive unrolling requires a deterministic strategy");
    BadSet out;
    std::function<void(Walk&, const Rat&, Strategy&, size_t)> extend =
        [&](Walk& w, const Rat& prob, Strategy& st, size_t depth) {
            if (depth == t) {
                if (out.walks.size() >= cap) throw capability_error("walk enumeration exceeded the cap");
                out.walks.push_back(w);
                out.probs.push_back(prob);
                out.total += prob;
                return;
            }
            int cur = w.final_state();
            auto present = inst.flaws_list(cur);
            if (present.empty()) return; // the run ended flawless earlier
            int f = detail::checked_pick(st, present, depth);
            for (const auto& [next, p] : inst.action(f, cur)) {
                w.steps.emplace_back(f, next);
                auto branch = st.clone();
                extend(w, prob * p, *branch, depth + 1);
                w.steps.pop_back();
            }
        };
    for (size_t s = 0; s < inst.state_count(); ++s) {
        if (sgn(inst.omega_init[s]) <= 0) continue;
        Walk w;
        w.start = static_cast<int>(s);
        auto st = strat.clone();
        st->begin_run(Rng(0));
        extend(w, inst.omega_init[s], *st, 0);
    }
    return out;
}

BadSet enumerate_bad_parallel(const EnumeratedInstance& inst, const DependencyGraph& dep,
                              const std::vector<int>& order, size_t s, size_t cap) {
    if (s == 0) throw input_error("round index must be at least 1");
    if (dep.size() != static_cast<uint32_t>(inst.flaw_count()))
        throw input_error("dependency graph size does not match the flaw count");
    BadSet out;
    uint32_t n = dep.size();
    std::function<void(int, size_t, const FlawSet&, const FlawSet&, Walk&, const Rat&)> extend =
        [&](int cur, size_t r, const FlawSet& blocked, const FlawSet& at_start, Walk& w, const Rat& prob) {
            auto present = inst.flaws_list(cur);
            std::vector<int> candidates;
            for (int f : present)
                if (!blocked.test(f)) candidates.push_back(f);
            if (candidates.empty()) {
                if (present.empty()) return; // flawless before round s
                FlawSet ps(n);
                for (int f : present) ps.set(f);
                extend(cur, r + 1, FlawSet(n), ps, w, prob);
                return;
            }
            int f = candidates.front();
            for (int g : candidates)
                if (rank_of(order, g) < rank_of(order, f)) f = g;
            if (!at_start.test(f))
                throw property_violation(
                    "shrinking property violated: round addressed a flaw that appeared mid-round");
            for (const auto& [next, p] : inst.action(f, cur)) {
                w.steps.emplace_back(f, next);
                if (r == s) {
                    if (out.walks.size() >= cap)
                        throw capability_error("walk enumeration exceeded the cap");
                    out.walks.push_back(w);
                    out.probs.push_back(prob * p);
                    out.total += prob * p;
                } else {
                    FlawSet b2 = blocked;
                    b2 |= dep.gamma(f, true);
                    extend(next, r, b2, at_start, w, prob * p);
                }
                w.steps.pop_back();
            }
        };
    for (size_t st = 0; st < inst.state_count(); ++st) {
        if (sgn(inst.omega_init[st]) <= 0) continue;
        auto present = inst.flaws_list(static_cast<int>(st));
        if (present.empty()) continue;
        FlawSet ps(n);
        for (int f : present) ps.set(f);
        Walk w;
        w.start = static_cast<int>(st);
        extend(static_cast<int>(st), 1, FlawSet(n), ps, w, inst.omega_init[st]);
    }
    return out;
}

} // namespace lll
