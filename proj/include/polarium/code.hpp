#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polarium/bits.hpp"

namespace polarium {

// CRC over bit sequences, MSB-first, no reflection.
struct CrcConfig {
    unsigned width = 16;
    std::uint32_t poly = 0x1021;
    std::uint32_t init = 0xFFFF;
    std::uint32_t xorout = 0;
};

enum class Construction { bhattacharyya, rm_polar };

std::string construction_name(Construction c);
Construction construction_from_name(std::string_view name);

// A polar code: block length N = 2^n, k information positions (the set A),
// everything else frozen to 0. When a CRC is attached, k counts payload+CRC
// bits carried on A.
struct PolarCode {
    std::uint32_t block_length = 0;            // N
    unsigned stages = 0;                       // n = log2(N)
    std::uint32_t info_length = 0;             // k = |A|
    std::vector<std::uint32_t> info_set;       // sorted indices of A
    std::vector<std::uint8_t> is_info;         // N flags, 1 on A
    Construction construction = Construction::bhattacharyya;
    double design_eps = 0.5;
    std::uint32_t weight_threshold = 0;        // d (rm_polar; 0 otherwise)
    std::optional<CrcConfig> crc;

    bool information(std::uint32_t i) const { return is_info[i] != 0; }
    double rate() const { return static_cast<double>(info_length) / block_length; }
    // Number of caller-supplied bits per frame (k minus CRC bits, if any).
    std::uint32_t payload_length() const
    {
        return crc ? info_length - crc->width : info_length;
    }
};

// Bhattacharyya parameters of the N = 2^n synthesized channels under the BEC
// recursion: z -> 2z - z^2 (degraded) and z -> z^2 (upgraded). Bit b of the
// channel index, read MSB first, selects the branch (0 degraded, 1 upgraded).
std::vector<double> bhattacharyya_parameters(unsigned n, double eps);

// Hamming weight of row i of the n-fold Kronecker transform: 2^popcount(i).
std::uint64_t row_weight(std::uint64_t i, unsigned n);

PolarCode construct_bhattacharyya(std::uint32_t block_length, std::uint32_t info_length,
                                  double eps, std::optional<CrcConfig> crc = {});

// Freezes every row with weight <= d first, then picks the k most reliable
// surviving positions. Throws if fewer than k rows survive (the message
// reports the maximum feasible k).
PolarCode construct_rm_polar(std::uint32_t block_length, std::uint32_t info_length,
                             std::uint32_t weight_threshold, double eps,
                             std::optional<CrcConfig> crc = {});

// x = u * F^{(x)n} over GF(2) via the n-stage butterfly. Self-inverse.
void polar_transform_inplace(BitVector& bits);
BitVector polar_transform(BitVector bits);

// One butterfly stage with pair separation `sep`: bits[i] ^= bits[i+sep] for
// every i with (i & sep) == 0. The full transform is the product of the n
// stages in any order.
void apply_butterfly_stage(BitVector& bits, std::uint32_t sep);

// Encode u (length N, frozen positions must be 0). Throws on violations.
BitVector encode(const BitVector& u, const PolarCode& code);

// Scatter payload (length k) into A in ascending index order; zeros elsewhere.
BitVector assemble_u(const BitVector& payload, const PolarCode& code);

// Gather the k bits on A. Inverse of assemble_u.
BitVector extract_info(const BitVector& u, const PolarCode& code);

// True iff x_hat equals the re-encoding of u_hat (frozen positions of u_hat
// forced to 0 first).
bool g_matrix_check(const BitVector& u_hat, const BitVector& x_hat, const PolarCode& code);

// Checksum bits (cfg.width of them, MSB first) over the payload bits.
BitVector crc_checksum(const BitVector& payload, const CrcConfig& cfg);
BitVector crc_append(const BitVector& payload, const CrcConfig& cfg);
bool crc_check(const BitVector& word, const CrcConfig& cfg);

// JSON round trip:
// {"N":..,"k":..,"construction":..,"design_eps":..,"d":..,"info_set":[..],"crc":{..}|null}
std::string code_to_json(const PolarCode& code, int indent = 2);
PolarCode code_from_json(const std::string& text);

}  // namespace polarium
