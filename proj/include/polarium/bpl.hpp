#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "polarium/bp.hpp"

namespace polarium {

struct BplConfig {
    unsigned list_size = 8;
    unsigned max_iterations = 200;
    std::uint64_t permutation_seed = 0;
    double clip = 40.0;
    CheckNode check_node = CheckNode::exact;
    double min_sum_alpha = 0.9375;
};

// Deterministic permutation list: the ascending identity, its n-1 nontrivial
// left-cyclic shifts, then (when list_size > n) distinct seeded random
// permutations drawn by Fisher-Yates over a SplitMix64 stream.
// Throws when list_size exceeds n!.
std::vector<StagePermutation> select_permutations(unsigned stages, unsigned list_size,
                                                  std::uint64_t seed);

// Index and Euclidean distance of the candidate codeword closest to y under
// the antipodal map 0 -> +1, 1 -> -1. Ties go to the lowest index.
std::pair<std::size_t, double> euclidean_select(std::span<const double> y,
                                                const std::vector<BitVector>& candidates);

struct BplResult {
    BitVector x_hat;
    BitVector u_hat;
    std::size_t selected_index = 0;
    bool any_valid = false;
    std::vector<DecodeCandidate> candidates;
    std::vector<double> distances;
};

// List decoding over permuted factor graphs: list_size independent BP
// decoders share llr_ch; candidates passing the G-matrix check are valid and
// the valid codeword closest to y wins. When no candidate is valid, every
// u_hat is re-encoded and the closest consistent codeword is returned with
// any_valid = false.
BplResult bpl_decode(std::span<const double> y, std::span<const double> llr_ch,
                     const PolarCode& code, const BplConfig& cfg);

}  // namespace polarium
