#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace polarium {

// A bit sequence with explicit length. Values are 0 or 1.
using BitVector = std::vector<std::uint8_t>;

std::string bits_to_string(const BitVector& bits);

// Parses a "0101..." string; throws std::invalid_argument on other characters.
BitVector bits_from_string(std::string_view text);

inline std::size_t hamming_distance(const BitVector& a, const BitVector& b)
{
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
        d += (a[i] != b[i]);
    return d;
}

}  // namespace polarium
