#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polarium/code.hpp"

namespace polarium {

// One factor-graph realization. pi is a permutation of {1,..,n}; stage j of
// the graph (1-based) pairs rows {i, i + s[j-1]} with s[j-1] = 2^(pi[j-1]-1).
struct StagePermutation {
    std::vector<unsigned> pi;
    std::vector<std::uint32_t> s;
};

std::vector<std::uint32_t> separations_from_permutation(const std::vector<unsigned>& pi);
StagePermutation make_permutation(std::vector<unsigned> pi);
StagePermutation identity_permutation(unsigned stages);
StagePermutation parse_permutation(std::string_view csv);  // "3,2,1"
std::string permutation_to_string(const StagePermutation& perm);

enum class CheckNode { exact, min_sum };
enum class StopRule { g_matrix, crc, none };

struct BpOptions {
    unsigned max_iterations = 200;
    double clip = 40.0;
    CheckNode check_node = CheckNode::exact;
    double min_sum_alpha = 0.9375;  // used in min_sum mode only
    StopRule stop = StopRule::g_matrix;
};

// Check-node combination of two LLRs. Inputs at or beyond the saturation
// magnitude `clip` are treated as certain (+/-inf); the result is clipped to
// [-clip, clip]. Exact mode evaluates 2*atanh(tanh(a/2)*tanh(b/2)) in a
// stable form; min_sum mode evaluates alpha*sign(a)*sign(b)*min(|a|,|b|).
double boxplus(double a, double b, double clip = 40.0,
               CheckNode mode = CheckNode::exact, double alpha = 0.9375);

struct PeOutputs {
    double l_upper;   // new left-going message, upper row
    double l_lower;   // new left-going message, lower row
    double r_upper;   // new right-going message, upper row
    double r_lower;   // new right-going message, lower row
};

// The four-port processing-element update. Inputs are the current messages on
// the element's ports: L from the right edge, R from the left edge.
PeOutputs pe_update(double l_upper_right, double l_lower_right,
                    double r_upper_left, double r_lower_left,
                    double clip = 40.0, CheckNode mode = CheckNode::exact,
                    double alpha = 0.9375);

// N x (n+1) message arrays. Column 0 carries the a-priori R messages (clip on
// frozen rows, 0 on information rows); column n carries the channel LLRs on
// the L side. Stored column-major: entry (row, col) at [col*N + row].
struct MessageMemory {
    std::uint32_t rows = 0;  // N
    unsigned cols = 0;       // n+1
    double clip = 40.0;
    std::vector<double> left;   // L messages
    std::vector<double> right;  // R messages

    double& l(unsigned col, std::uint32_t row) { return left[static_cast<std::size_t>(col) * rows + row]; }
    double& r(unsigned col, std::uint32_t row) { return right[static_cast<std::size_t>(col) * rows + row]; }
    double l(unsigned col, std::uint32_t row) const { return left[static_cast<std::size_t>(col) * rows + row]; }
    double r(unsigned col, std::uint32_t row) const { return right[static_cast<std::size_t>(col) * rows + row]; }
};

MessageMemory init_messages(std::span<const double> llr_ch, const PolarCode& code, double clip);

// One full iteration: R sweep stage 1->n, then L sweep stage n->1.
// Returns the number of PE executions performed (2 * (N/2) * n).
std::uint64_t bp_run_iteration(MessageMemory& mem, const StagePermutation& perm,
                               const BpOptions& opt);

struct DecodeCandidate {
    BitVector u_hat;
    BitVector x_hat;
    bool valid = false;          // g_matrix_check(u_hat, x_hat)
    unsigned iterations = 0;
    std::uint64_t pe_updates = 0;
};

// Hard decisions from the current memory: u from column 0, x from column n,
// LLR sum < 0 -> bit 1 (ties -> 0), frozen u positions forced to 0.
void bp_hard_decisions(const MessageMemory& mem, const PolarCode& code,
                       BitVector& u_hat, BitVector& x_hat);

DecodeCandidate bp_decode(std::span<const double> llr_ch, const PolarCode& code,
                          const StagePermutation& perm, const BpOptions& opt);

}  // namespace polarium
