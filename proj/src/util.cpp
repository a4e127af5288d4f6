#include "jep/util.hpp"

#include <bit>

namespace jep {

std::size_t IdSet::count() const {
    std::size_t total = 0;
    for (auto w : bits_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
}

std::vector<int> IdSet::to_vector() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < universe_; ++i)
        if (contains(i)) out.push_back(static_cast<int>(i));
    return out;
}

std::string pow2_decimal(std::uint64_t exponent) {
    // base-1e9 limbs, little-endian
    std::vector<std::uint32_t> limbs{1};
    for (std::uint64_t i = 0; i < exponent; ++i) {
        std::uint32_t carry = 0;
        for (auto& limb : limbs) {
            std::uint64_t v = 2ULL * limb + carry;
            limb = static_cast<std::uint32_t>(v % 1000000000ULL);
            carry = static_cast<std::uint32_t>(v / 1000000000ULL);
        }
        if (carry) limbs.push_back(carry);
    }
    std::string out = std::to_string(limbs.back());
    for (auto it = limbs.rbegin() + 1; it != limbs.rend(); ++it) {
        std::string part = std::to_string(*it);
        out += std::string(9 - part.size(), '0') + part;
    }
    return out;
}

std::string pow2_string(std::uint64_t exponent) {
    if (exponent <= 65536) return pow2_decimal(exponent);
    return "2^" + std::to_string(exponent);
}

}  // namespace jep
