#include "lll/instance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lll {

Rat rat_parse(const std::string& text) {
    std::string t = text;
    auto slash = t.find('/');
    if (slash != std::string::npos) {
        Rat q;
        try {
            q = Rat(t, 10); // explicit base: GMP's default treats leading zeros as octal
        } catch (const std::invalid_argument&) {
            throw input_error("cannot parse rational: " + text);
        }
        if (sgn(q.get_den()) == 0) throw input_error("rational with zero denominator: " + text);
        q.canonicalize();
        return q;
    }
    auto dot = t.find('.');
    if (dot == std::string::npos) {
        try {
            return Rat(t, 10);
        } catch (const std::invalid_argument&) {
            throw input_error("cannot parse rational: " + text);
        }
    }
    // decimal string: digits.digits -> exact fraction over a power of ten
    std::string digits = t.substr(0, dot) + t.substr(dot + 1);
    size_t frac_len = t.size() - dot - 1;
    if (digits.empty() || frac_len == 0) throw input_error("cannot parse rational: " + text);
    bool neg = false;
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
        neg = digits[0] == '-';
        digits.erase(digits.begin());
    }
    for (char c : digits)
        if (!std::isdigit(static_cast<unsigned char>(c))) throw input_error("cannot parse rational: " + text);
    Rat num(digits.empty() ? std::string("0") : digits, 10);
    Rat den = rat_pow(Rat(10), frac_len);
    Rat q = num / den;
    q.canonicalize();
    return neg ? Rat(-q) : q;
}

const std::vector<std::pair<int, Rat>>& EnumeratedInstance::action(int f, int s) const {
    if (f < 0 || f >= flaw_count()) throw input_error("flaw index out of range");
    if (s < 0 || static_cast<size_t>(s) >= state_count()) throw input_error("state index out of range");
    if (!flaw_holds(f, s))
        throw input_error("action requested for flaw " + flaw_label(f) + " absent at state " + state_label(s));
    return actions[static_cast<size_t>(f)][static_cast<size_t>(s)];
}

Rat EnumeratedInstance::rho(int f, int s, int s2) const {
    for (const auto& [t, p] : action(f, s))
        if (t == s2) return p;
    return Rat(0);
}

Rat EnumeratedInstance::flaw_measure(int f) const {
    Rat total(0);
    for (size_t s = 0; s < state_count(); ++s)
        if (flaw_holds(f, static_cast<int>(s))) total += omega[s];
    return total;
}

std::string EnumeratedInstance::flaw_label(int f) const {
    if (static_cast<size_t>(f) < flaw_names.size() && !flaw_names[static_cast<size_t>(f)].empty())
        return flaw_names[static_cast<size_t>(f)];
    return "f" + std::to_string(f);
}

std::string EnumeratedInstance::state_label(int s) const {
    if (static_cast<size_t>(s) < state_names.size() && !state_names[static_cast<size_t>(s)].empty())
        return state_names[static_cast<size_t>(s)];
    return "s" + std::to_string(s);
}

bool EnumeratedInstance::near_one(const Rat& q) const {
    if (exact) return q == 1;
    return std::abs(to_double(q) - 1.0) <= kSumTolerance;
}

void EnumeratedInstance::validate() const {
    const size_t ns = state_count();
    if (ns == 0) throw input_error(name + ": empty state space");
    if (omega_init.size() != ns || present.size() != ns)
        throw input_error(name + ": per-state tables disagree on the number of states");

    Rat wsum(0), isum(0);
    for (size_t s = 0; s < ns; ++s) {
        if (sgn(omega[s]) <= 0) throw input_error(name + ": omega must be positive at " + state_label(static_cast<int>(s)));
        if (sgn(omega_init[s]) < 0) throw input_error(name + ": negative initial mass");
        wsum += omega[s];
        isum += omega_init[s];
        if (present[s].universe() != static_cast<uint32_t>(flaw_count()))
            throw input_error(name + ": flaw-set universe mismatch");
    }
    if (!near_one(wsum)) throw input_error(name + ": omega does not sum to 1 (got " + rat_str(wsum) + ")");
    if (!near_one(isum)) throw input_error(name + ": initial measure does not sum to 1");

    for (int f = 0; f < flaw_count(); ++f) {
        const auto& per_state = actions[static_cast<size_t>(f)];
        if (per_state.size() != ns) throw input_error(name + ": action table shape mismatch");
        bool nonempty = false;
        for (size_t s = 0; s < ns; ++s) {
            const auto& out = per_state[s];
            if (!flaw_holds(f, static_cast<int>(s))) {
                if (!out.empty())
                    throw input_error(name + ": action listed where flaw " + flaw_label(f) + " is absent");
                continue;
            }
            nonempty = true;
            if (out.empty())
                throw input_error(name + ": flaw " + flaw_label(f) + " has no action at " +
                                  state_label(static_cast<int>(s)));
            Rat sum(0);
            std::vector<int> seen;
            for (const auto& [t, p] : out) {
                if (t < 0 || static_cast<size_t>(t) >= ns) throw input_error(name + ": action target out of range");
                if (sgn(p) <= 0) throw input_error(name + ": action probabilities must be positive");
                seen.push_back(t);
                sum += p;
            }
            std::sort(seen.begin(), seen.end());
            if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
                throw input_error(name + ": duplicate action target");
            if (!near_one(sum))
                throw input_error(name + ": action distribution at (" + flaw_label(f) + ", " +
                                  state_label(static_cast<int>(s)) + ") sums to " + rat_str(sum));
        }
        if (!nonempty) throw input_error(name + ": flaw " + flaw_label(f) + " holds nowhere");
    }
}

std::vector<int> EnumeratedInstance::states_with(int f) const {
    std::vector<int> out;
    for (size_t s = 0; s < state_count(); ++s)
        if (flaw_holds(f, static_cast<int>(s))) out.push_back(static_cast<int>(s));
    return out;
}

std::optional<int> EnumeratedInstance::atomic_preimage(int f, int s2) const {
    std::optional<int> found;
    for (int s : states_with(f)) {
        if (!action_contains(f, s, s2)) continue;
        if (found)
            throw property_violation(name + ": flaw " + flaw_label(f) + " has two sources for " +
                                     state_label(s2) + " (not atomic)");
        found = s;
    }
    return found;
}

EnumeratedInstance::State EnumeratedInstance::sample_initial(Rng& rng) const {
    double u = rng.next_double();
    double acc = 0.0;
    int last_positive = -1;
    for (size_t s = 0; s < state_count(); ++s) {
        double w = to_double(omega_init[s]);
        if (w <= 0) continue;
        last_positive = static_cast<int>(s);
        acc += w;
        if (u < acc) return static_cast<int>(s);
    }
    if (last_positive < 0) throw input_error(name + ": initial measure has empty support");
    return last_positive; // float round-off fell past the end
}

EnumeratedInstance::State EnumeratedInstance::sample_action(int f, State s, Rng& rng) const {
    const auto& out = action(f, s);
    double u = rng.next_double();
    double acc = 0.0;
    for (const auto& [t, p] : out) {
        acc += to_double(p);
        if (u < acc) return t;
    }
    return out.back().first;
}

void validate_walk(const EnumeratedInstance& inst, const Walk& walk, bool require_support) {
    if (walk.start < 0 || static_cast<size_t>(walk.start) >= inst.state_count())
        throw property_violation("walk starts outside the state space");
    if (require_support && sgn(inst.omega_init[static_cast<size_t>(walk.start)]) <= 0)
        throw property_violation("walk starts outside the initial support");
    int cur = walk.start;
    for (size_t i = 0; i < walk.steps.size(); ++i) {
        auto [f, next] = walk.steps[i];
        if (f < 0 || f >= inst.flaw_count()) throw property_violation("walk addresses unknown flaw");
        if (!inst.flaw_holds(f, cur))
            throw property_violation("step " + std::to_string(i + 1) + " addresses flaw " + inst.flaw_label(f) +
                                     " absent at " + inst.state_label(cur));
        if (!inst.action_contains(f, cur, next))
            throw property_violation("step " + std::to_string(i + 1) + " moves outside the action support");
        cur = next;
    }
}

Rat walk_probability(const EnumeratedInstance& inst, const Walk& walk) {
    validate_walk(inst, walk, true);
    Rat p = inst.omega_init[static_cast<size_t>(walk.start)];
    int cur = walk.start;
    for (auto [f, next] : walk.steps) {
        p *= inst.rho(f, cur, next);
        cur = next;
    }
    return p;
}

Rat lambda_of_word(const Word& word, const std::vector<Rat>& lambda) {
    Rat p(1);
    for (int f : word) p *= lambda.at(static_cast<size_t>(f));
    return p;
}

} // namespace lll
