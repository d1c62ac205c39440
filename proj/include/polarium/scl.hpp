#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polarium/bp.hpp"
#include "polarium/code.hpp"

namespace polarium {

// Successive-cancellation node operations.
double sc_f(double a, double b, double clip = 40.0);
inline double sc_g(double a, double b, std::uint8_t u) { return u ? b - a : b + a; }

struct ScResult {
    BitVector u_hat;
    BitVector x_hat;
    std::uint64_t node_ops = 0;  // f/g evaluations
};

ScResult sc_decode(std::span<const double> llr_ch, const PolarCode& code, double clip = 40.0);

struct SclResult {
    BitVector u_hat;
    BitVector x_hat;
    double path_metric = 0.0;
    std::uint64_t node_ops = 0;
    bool crc_ok = false;  // meaningful when decoded with use_crc
};

// LLR-based list decoding: both extensions are spawned at every information
// bit and the best list_size paths survive by path metric (stable order,
// lowest path index wins ties). The metric accumulates ln(1 + exp(-(1-2u)*L))
// per decision, so with a full list the lowest-metric path is the ML word.
// With use_crc the lowest-metric path passing the code's CRC is returned,
// falling back to the lowest-metric path overall when none passes.
SclResult scl_decode(std::span<const double> llr_ch, const PolarCode& code,
                     unsigned list_size, bool use_crc = false, double clip = 40.0);

// Exhaustive minimum-Euclidean-distance decoding; requires k <= 20. Ties go
// to the lexicographically smallest message.
BitVector ml_decode_bruteforce(std::span<const double> y, const PolarCode& code);

}  // namespace polarium
