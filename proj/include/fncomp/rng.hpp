#ifndef FNCOMP_RNG_HPP
#define FNCOMP_RNG_HPP

#include <cstdint>

namespace fncomp {

// Splitmix64: tiny, portable, deterministic across platforms. Used for all
// seeded randomness (restart draws, witness sampling) so identical configs
// reproduce byte-identical reports.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Uniform in (0,1), never exactly 0.
    double uniform() {
        return (double(next() >> 11) + 0.5) * 0x1.0p-53;
    }
    int below(int n) { return int(next() % uint64_t(n)); }

  private:
    uint64_t state_;
};

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
    Rng r(a ^ (0x9e3779b97f4a7c15ULL * (b + 1)));
    return r.next();
}
inline uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c) {
    return mix_seed(mix_seed(a, b), c);
}

} // namespace fncomp

#endif
