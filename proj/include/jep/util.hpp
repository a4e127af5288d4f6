#ifndef JEP_UTIL_HPP
#define JEP_UTIL_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace jep {

/// Enumeration and fixpoint caps. Defaults are deliberately conservative so
/// oversized instances fail with a SizeLimitError instead of exhausting memory.
struct Caps {
    std::size_t max_items = 1'000'000;     // enumerated trees / strings / members
    std::size_t max_walks = 1'000'000;     // walk set size
    std::size_t max_families = 1'000'000;  // reachable walk-family states
};

/// Deterministic 64-bit RNG (splitmix64). Used instead of <random> engines +
/// distributions so that trial streams are identical across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, bound) via rejection sampling.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) return 0;
        std::uint64_t limit = ~0ULL - ~0ULL % bound;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

    int range(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool coin() { return (next() & 1) != 0; }

  private:
    std::uint64_t state_;
};

/// Set of small integer ids, stored as a fixed-width bitset.
class IdSet {
  public:
    IdSet() = default;
    explicit IdSet(std::size_t universe) : bits_((universe + 63) / 64, 0), universe_(universe) {}

    void insert(std::size_t i) { bits_[i >> 6] |= 1ULL << (i & 63); }
    bool contains(std::size_t i) const { return (bits_[i >> 6] >> (i & 63)) & 1; }
    std::size_t universe() const { return universe_; }

    bool intersects(const IdSet& other) const {
        std::size_t n = std::min(bits_.size(), other.bits_.size());
        for (std::size_t i = 0; i < n; ++i)
            if (bits_[i] & other.bits_[i]) return true;
        return false;
    }

    bool empty() const {
        for (auto w : bits_)
            if (w) return false;
        return true;
    }

    std::size_t count() const;
    std::vector<int> to_vector() const;

    bool operator==(const IdSet& other) const { return bits_ == other.bits_; }

  private:
    std::vector<std::uint64_t> bits_;
    std::size_t universe_ = 0;
};

/// Exact decimal representation of 2^exponent.
std::string pow2_decimal(std::uint64_t exponent);

/// Human-readable form of 2^exponent: exact decimal for exponents up to 65536,
/// "2^e" beyond that.
std::string pow2_string(std::uint64_t exponent);

}  // namespace jep

#endif
