#ifndef FNCOMP_BITSET_HPP
#define FNCOMP_BITSET_HPP

#include <cstdint>
#include <vector>
#include <string>
#include <functional>

namespace fncomp {

// Fixed-universe bitset with as many 64-bit words as the universe needs.
// Universe size is set at construction and never changes; all binary
// operations require equal universe sizes.
class Bitset {
  public:
    Bitset() : n_(0) {}
    explicit Bitset(int n) : n_(n), w_((n + 63) / 64, 0) {}

    int universe() const { return n_; }

    void set(int i) { w_[i >> 6] |= (uint64_t{1} << (i & 63)); }
    void reset(int i) { w_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }
    bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

    int count() const {
        int c = 0;
        for (uint64_t w : w_) c += __builtin_popcountll(w);
        return c;
    }
    bool any() const {
        for (uint64_t w : w_) if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    bool intersects(const Bitset& o) const {
        for (size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }
    bool is_subset_of(const Bitset& o) const {
        for (size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }

    Bitset& operator|=(const Bitset& o) {
        for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    Bitset& operator&=(const Bitset& o) {
        for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    Bitset& subtract(const Bitset& o) {
        for (size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
        return *this;
    }
    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    Bitset minus(const Bitset& o) const { Bitset r(*this); r.subtract(o); return r; }

    Bitset complement_in(int n) const {
        Bitset r(n);
        for (int i = 0; i < n; ++i) if (!test(i)) r.set(i);
        return r;
    }

    // Lowest set bit, or -1.
    int first() const {
        for (size_t i = 0; i < w_.size(); ++i)
            if (w_[i]) return int(i) * 64 + __builtin_ctzll(w_[i]);
        return -1;
    }

    void for_each(const std::function<void(int)>& fn) const {
        for (size_t i = 0; i < w_.size(); ++i) {
            uint64_t w = w_[i];
            while (w) {
                int b = __builtin_ctzll(w);
                fn(int(i) * 64 + b);
                w &= w - 1;
            }
        }
    }
    std::vector<int> bits() const {
        std::vector<int> out;
        for_each([&](int b) { out.push_back(b); });
        return out;
    }

    bool operator==(const Bitset& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const Bitset& o) const { return !(*this == o); }

    // Canonical order: by cardinality, then by reversed-word value
    // (i.e. as an integer with low vertices in low bits).
    bool canonical_less(const Bitset& o) const {
        int a = count(), b = o.count();
        if (a != b) return a < b;
        for (size_t i = w_.size(); i-- > 0;)
            if (w_[i] != o.w_[i]) return w_[i] < o.w_[i];
        return false;
    }

    std::string to_string(const std::vector<std::string>& labels) const {
        std::string s = "{";
        bool first_el = true;
        for (int b : bits()) {
            if (!first_el) s += ",";
            s += labels[size_t(b)];
            first_el = false;
        }
        return s + "}";
    }

  private:
    int n_;
    std::vector<uint64_t> w_;
};

} // namespace fncomp

#endif
