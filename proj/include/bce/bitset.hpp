#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <vector>

namespace bce {

// Dynamic bitset over 64-bit words, sized once at construction.
// Adjacency rows and alive-masks are stored in these; conflict tests are
// intersection / symmetric-difference of rows, so the set algebra here is
// the solver's hot path.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(int nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    int size() const { return nbits_; }

    bool test(int i) const {
        assert(i >= 0 && i < nbits_);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(int i) {
        assert(i >= 0 && i < nbits_);
        words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }

    void reset(int i) {
        assert(i >= 0 && i < nbits_);
        words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    void clear() {
        for (auto& w : words_) w = 0;
    }

    int count() const {
        int c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }

    bool none() const {
        for (auto w : words_) {
            if (w != 0) return false;
        }
        return true;
    }

    bool any() const { return !none(); }

    bool intersects(const Bitset& o) const {
        assert(nbits_ == o.nbits_);
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (words_[i] & o.words_[i]) return true;
        }
        return false;
    }

    bool is_subset_of(const Bitset& o) const {
        assert(nbits_ == o.nbits_);
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (words_[i] & ~o.words_[i]) return false;
        }
        return true;
    }

    Bitset& operator&=(const Bitset& o) {
        assert(nbits_ == o.nbits_);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }

    Bitset& operator|=(const Bitset& o) {
        assert(nbits_ == o.nbits_);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }

    Bitset& operator^=(const Bitset& o) {
        assert(nbits_ == o.nbits_);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
        return *this;
    }

    // this \ o
    Bitset& subtract(const Bitset& o) {
        assert(nbits_ == o.nbits_);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
    friend Bitset operator^(Bitset a, const Bitset& b) { return a ^= b; }
    friend Bitset minus(Bitset a, const Bitset& b) { return a.subtract(b); }

    bool operator==(const Bitset& o) const = default;

    // Smallest set bit, or -1.
    int find_first() const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (words_[i]) return static_cast<int>(i) * 64 + std::countr_zero(words_[i]);
        }
        return -1;
    }

    // Visits set bits in ascending order.
    template <class F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            std::uint64_t w = words_[i];
            while (w) {
                int b = std::countr_zero(w);
                f(static_cast<int>(i) * 64 + b);
                w &= w - 1;
            }
        }
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        out.reserve(count());
        for_each([&](int i) { out.push_back(i); });
        return out;
    }

private:
    int nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace bce
