#include "lll/engine.hpp"

#include <algorithm>

namespace lll {

namespace {

std::vector<int> checked_order(std::vector<int> order) {
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i] != static_cast<int>(i)) throw input_error("priority order must be a permutation");
    return order;
}

class FirstPresent final : public Strategy {
public:
    explicit FirstPresent(std::vector<int> order) : order_(checked_order(std::move(order))) {}
    int select(const std::vector<int>& present, size_t) override {
        int best = present.front();
        for (int f : present)
            if (rank(f) < rank(best)) best = f;
        return best;
    }
    std::unique_ptr<Strategy> clone() const override { return std::make_unique<FirstPresent>(*this); }
    bool deterministic() const override { return true; }
    std::string name() const override { return "first_present"; }

private:
    int rank(int f) const {
        if (order_.empty()) return f;
        if (f < 0 || static_cast<size_t>(f) >= order_.size()) throw input_error("flaw outside priority order");
        return order_[static_cast<size_t>(f)];
    }
    std::vector<int> order_; // order_[f] = rank of f
};

class PiStable final : public Strategy {
public:
    PiStable(const DependencyGraph& dep, std::vector<int> order)
        : dep_(dep), order_(checked_order(std::move(order))), blocked_(dep.size()) {}

    void begin_run(Rng) override {
        blocked_ = FlawSet(dep_.size());
        round_open_ = false;
    }

    int select(const std::vector<int>& present, size_t) override {
        std::vector<int> candidates;
        for (int f : present)
            if (!blocked_.test(f)) candidates.push_back(f);
        if (candidates.empty()) { // close the round, start a new one
            blocked_ = FlawSet(dep_.size());
            candidates = present;
        }
        int best = candidates.front();
        for (int f : candidates)
            if (rank(f) < rank(best)) best = f;
        blocked_ |= dep_.gamma(best, true);
        round_open_ = true;
        return best;
    }
    std::unique_ptr<Strategy> clone() const override { return std::make_unique<PiStable>(*this); }
    bool deterministic() const override { return true; }
    std::string name() const override { return "pi_stable"; }

private:
    int rank(int f) const {
        if (order_.empty()) return f;
        if (f < 0 || static_cast<size_t>(f) >= order_.size()) throw input_error("flaw outside priority order");
        return order_[static_cast<size_t>(f)];
    }
    DependencyGraph dep_;
    std::vector<int> order_;
    FlawSet blocked_;
    bool round_open_ = false;
};

class UniformRandom final : public Strategy {
public:
    UniformRandom() : rng_(0) {}
    void begin_run(Rng rng) override { rng_ = rng; }
    int select(const std::vector<int>& present, size_t) override {
        return present[static_cast<size_t>(rng_.below(present.size()))];
    }
    std::unique_ptr<Strategy> clone() const override { return std::make_unique<UniformRandom>(*this); }
    bool deterministic() const override { return false; }
    std::string name() const override { return "uniform_random"; }

private:
    Rng rng_;
};

class Scripted final : public Strategy {
public:
    explicit Scripted(std::vector<int> script) : script_(std::move(script)) {}
    void begin_run(Rng) override { at_ = 0; }
    int select(const std::vector<int>&, size_t) override {
        if (at_ >= script_.size()) throw property_violation("scripted strategy ran past its script");
        return script_[at_++];
    }
    std::unique_ptr<Strategy> clone() const override { return std::make_unique<Scripted>(*this); }
    bool deterministic() const override { return true; }
    std::string name() const override { return "scripted"; }

private:
    std::vector<int> script_;
    size_t at_ = 0;
};

} // namespace

std::unique_ptr<Strategy> make_first_present_strategy(std::vector<int> order) {
    return std::make_unique<FirstPresent>(std::move(order));
}

std::unique_ptr<Strategy> make_pi_stable_strategy(const DependencyGraph& dep, std::vector<int> order) {
    return std::make_unique<PiStable>(dep, std::move(order));
}

std::unique_ptr<Strategy> make_uniform_random_strategy() { return std::make_unique<UniformRandom>(); }

std::unique_ptr<Strategy> make_scripted_strategy(std::vector<int> script) {
    if (script.empty()) throw input_error("scripted strategy needs at least one flaw");
    return std::make_unique<Scripted>(std::move(script));
}

std::unique_ptr<Strategy> make_strategy(const std::string& spec, const DependencyGraph& dep) {
    if (spec == "first_present" || spec == "first") return make_first_present_strategy();
    if (spec == "pi_stable") return make_pi_stable_strategy(dep);
    if (spec == "uniform_random" || spec == "uniform") return make_uniform_random_strategy();
    if (spec.rfind("scripted:", 0) == 0) {
        std::vector<int> script;
        std::string rest = spec.substr(9);
        size_t pos = 0;
        while (pos < rest.size()) {
            size_t comma = rest.find(',', pos);
            if (comma == std::string::npos) comma = rest.size();
            try {
                script.push_back(std::stoi(rest.substr(pos, comma - pos)));
            } catch (const std::exception&) {
                throw input_error("bad scripted strategy: " + spec);
            }
            pos = comma + 1;
        }
        if (script.empty()) throw input_error("scripted strategy needs at least one flaw");
        return make_scripted_strategy(std::move(script));
    }
    throw input_error("unknown strategy: " + spec +
                      " (expected first_present | pi_stable | uniform_random | scripted:...)");
}

} // namespace lll
