#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace idsolve {

// Dynamic fixed-capacity bitset over vertex ids [0, n).
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(int nbits) : nbits_(nbits), w_((nbits + 63) / 64, 0) {}

    static Bitset of(int nbits, std::initializer_list<int> ids) {
        Bitset b(nbits);
        for (int i : ids) b.set(i);
        return b;
    }
    static Bitset of(int nbits, const std::vector<int>& ids) {
        Bitset b(nbits);
        for (int i : ids) b.set(i);
        return b;
    }

    int capacity() const { return nbits_; }

    void set(int i) {
        assert(i >= 0 && i < nbits_);
        w_[i >> 6] |= uint64_t(1) << (i & 63);
    }
    void reset(int i) {
        assert(i >= 0 && i < nbits_);
        w_[i >> 6] &= ~(uint64_t(1) << (i & 63));
    }
    bool test(int i) const {
        assert(i >= 0 && i < nbits_);
        return (w_[i >> 6] >> (i & 63)) & 1;
    }

    int count() const {
        int c = 0;
        for (uint64_t w : w_) c += __builtin_popcountll(w);
        return c;
    }
    bool any() const {
        for (uint64_t w : w_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    Bitset& operator|=(const Bitset& o) {
        assert(nbits_ == o.nbits_);
        for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    Bitset& operator&=(const Bitset& o) {
        assert(nbits_ == o.nbits_);
        for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    Bitset& subtract(const Bitset& o) {
        assert(nbits_ == o.nbits_);
        for (size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
        return *this;
    }
    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset minus(Bitset a, const Bitset& b) { return a.subtract(b); }

    bool intersects(const Bitset& o) const {
        assert(nbits_ == o.nbits_);
        for (size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }
    bool is_subset_of(const Bitset& o) const {
        assert(nbits_ == o.nbits_);
        for (size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }

    bool operator==(const Bitset& o) const { return nbits_ == o.nbits_ && w_ == o.w_; }
    bool operator!=(const Bitset& o) const { return !(*this == o); }

    // first set bit >= from, or -1
    int next(int from = 0) const {
        if (from >= nbits_) return -1;
        int word = from >> 6;
        uint64_t cur = w_[word] & (~uint64_t(0) << (from & 63));
        while (true) {
            if (cur) return (word << 6) + __builtin_ctzll(cur);
            if (++word >= (int)w_.size()) return -1;
            cur = w_[word];
        }
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        out.reserve(count());
        for (int i = next(0); i >= 0; i = next(i + 1)) out.push_back(i);
        return out;
    }

    uint64_t hash() const {
        uint64_t h = 1469598103934665603ull;
        for (uint64_t w : w_) {
            h ^= w;
            h *= 1099511628211ull;
        }
        return h;
    }

    // Compare as ascending id sequences (used for deterministic tie-breaks).
    bool lex_less(const Bitset& o) const {
        auto a = to_vector(), b = o.to_vector();
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }

private:
    int nbits_ = 0;
    std::vector<uint64_t> w_;
};

}  // namespace idsolve
