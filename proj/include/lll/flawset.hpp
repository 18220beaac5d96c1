#ifndef LLL_FLAWSET_HPP
#define LLL_FLAWSET_HPP

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "lll/errors.hpp"

namespace lll {

/** Set of flaw indices over a fixed universe [0, n), packed into 64-bit words. */
class FlawSet {
public:
    FlawSet() = default;
    explicit FlawSet(uint32_t universe) : n_(universe), w_((universe + 63) / 64, 0) {}

    static FlawSet of(uint32_t universe, std::initializer_list<int> elems) {
        FlawSet s(universe);
        for (int e : elems) s.set(e);
        return s;
    }

    uint32_t universe() const { return n_; }

    bool test(int i) const {
        check(i);
        return (w_[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1u;
    }
    void set(int i) {
        check(i);
        w_[static_cast<size_t>(i) >> 6] |= uint64_t{1} << (i & 63);
    }
    void reset(int i) {
        check(i);
        w_[static_cast<size_t>(i) >> 6] &= ~(uint64_t{1} << (i & 63));
    }
    void clear() {
        for (auto& w : w_) w = 0;
    }

    FlawSet& operator|=(const FlawSet& o) {
        match(o);
        for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    FlawSet& operator&=(const FlawSet& o) {
        match(o);
        for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    /** Set difference: *this minus o. */
    FlawSet& operator-=(const FlawSet& o) {
        match(o);
        for (size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
        return *this;
    }

    friend FlawSet operator|(FlawSet a, const FlawSet& b) { return a |= b; }
    friend FlawSet operator&(FlawSet a, const FlawSet& b) { return a &= b; }
    friend FlawSet operator-(FlawSet a, const FlawSet& b) { return a -= b; }

    bool operator==(const FlawSet& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const FlawSet& o) const { return !(*this == o); }

    bool none() const {
        for (uint64_t w : w_)
            if (w) return false;
        return true;
    }
    bool any() const { return !none(); }

    int count() const {
        int c = 0;
        for (uint64_t w : w_) c += std::popcount(w);
        return c;
    }

    bool intersects(const FlawSet& o) const {
        match(o);
        for (size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }

    bool is_subset_of(const FlawSet& o) const {
        match(o);
        for (size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }

    /** Lowest element, or -1 when empty. */
    int first() const {
        for (size_t i = 0; i < w_.size(); ++i)
            if (w_[i]) return static_cast<int>(i * 64 + std::countr_zero(w_[i]));
        return -1;
    }

    template <class F>
    void for_each(F&& fn) const {
        for (size_t i = 0; i < w_.size(); ++i) {
            uint64_t w = w_[i];
            while (w) {
                fn(static_cast<int>(i * 64 + std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        out.reserve(static_cast<size_t>(count()));
        for_each([&](int i) { out.push_back(i); });
        return out;
    }

    /** Dense key for universes of at most 64 flaws (Shearer tables). */
    uint64_t mask64() const {
        if (n_ > 64) throw capability_error("FlawSet::mask64 on universe > 64");
        return w_.empty() ? 0 : w_[0];
    }

    static FlawSet from_mask64(uint32_t universe, uint64_t mask) {
        if (universe > 64) throw capability_error("FlawSet::from_mask64 on universe > 64");
        FlawSet s(universe);
        if (!s.w_.empty()) s.w_[0] = mask;
        return s;
    }

private:
    void check(int i) const {
        if (i < 0 || static_cast<uint32_t>(i) >= n_) throw input_error("flaw index out of range");
    }
    void match(const FlawSet& o) const {
        if (n_ != o.n_) throw input_error("FlawSet universe mismatch");
    }

    uint32_t n_ = 0;
    std::vector<uint64_t> w_;
};

} // namespace lll

#endif
