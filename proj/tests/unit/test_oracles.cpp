#include "doctest.h"

#include <string>

#include "test_support.hpp"

// The oracles themselves get a once-over against closed forms before anything
// else relies on them.

using namespace testsupport;

TEST_CASE("kronecker matrix matches the subset identity")
{
    for (unsigned n : {1u, 2u, 3u, 5u}) {
        auto g = kronecker_matrix(n);
        const std::size_t size = std::size_t{1} << n;
        REQUIRE(g.size() == size);
        for (std::size_t i = 0; i < size; ++i)
            for (std::size_t j = 0; j < size; ++j)
                CHECK(g[i][j] == (((i & j) == j) ? 1 : 0));
    }
}

TEST_CASE("matrix encode reproduces hand examples")
{
    auto g2 = kronecker_matrix(2);
    CHECK(matrix_encode({0, 1, 0, 1}, g2) == BitVector{0, 0, 1, 1});
    CHECK(matrix_encode({0, 0, 0, 1}, g2) == BitVector{1, 1, 1, 1});
}

TEST_CASE("long-division CRC reproduces the CCITT check value")
{
    // ASCII "123456789", bits MSB first, CRC-16/CCITT-FALSE -> 0x29B1.
    BitVector message;
    for (char c : std::string("123456789"))
        for (int j = 7; j >= 0; --j)
            message.push_back(static_cast<std::uint8_t>((c >> j) & 1));
    auto remainder = crc_long_division(message, 16, 0x1021, 0xFFFF, 0);
    std::uint32_t value = 0;
    for (auto b : remainder)
        value = (value << 1) | b;
    CHECK(value == 0x29B1);
}
