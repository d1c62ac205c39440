#include "polarium/bp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace polarium {

std::vector<std::uint32_t> separations_from_permutation(const std::vector<unsigned>& pi)
{
    const unsigned n = static_cast<unsigned>(pi.size());
    if (n == 0)
        throw std::invalid_argument("permutation is empty");
    std::vector<std::uint8_t> seen(n + 1, 0);
    for (unsigned v : pi) {
        if (v < 1 || v > n || seen[v])
            throw std::invalid_argument("not a permutation of 1..n");
        seen[v] = 1;
    }
    std::vector<std::uint32_t> s(n);
    for (unsigned j = 0; j < n; ++j)
        s[j] = std::uint32_t{1} << (pi[j] - 1);
    return s;
}

StagePermutation make_permutation(std::vector<unsigned> pi)
{
    StagePermutation perm;
    perm.s = separations_from_permutation(pi);
    perm.pi = std::move(pi);
    return perm;
}

StagePermutation identity_permutation(unsigned stages)
{
    std::vector<unsigned> pi(stages);
    for (unsigned j = 0; j < stages; ++j)
        pi[j] = j + 1;
    return make_permutation(std::move(pi));
}

StagePermutation parse_permutation(std::string_view csv)
{
    std::vector<unsigned> pi;
    const char* p = csv.data();
    const char* end = csv.data() + csv.size();
    while (p < end) {
        unsigned v = 0;
        auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc{})
            throw std::invalid_argument("malformed permutation: " + std::string(csv));
        pi.push_back(v);
        p = next;
        if (p < end) {
            if (*p != ',')
                throw std::invalid_argument("malformed permutation: " + std::string(csv));
            ++p;
        }
    }
    return make_permutation(std::move(pi));
}

std::string permutation_to_string(const StagePermutation& perm)
{
    std::string out;
    for (std::size_t j = 0; j < perm.pi.size(); ++j) {
        if (j)
            out.push_back(',');
        out += std::to_string(perm.pi[j]);
    }
    return out;
}

double boxplus(double a, double b, double clip, CheckNode mode, double alpha)
{
    // Saturated inputs behave as certainties in either mode.
    const bool sat_a = std::abs(a) >= clip;
    const bool sat_b = std::abs(b) >= clip;
    if (sat_a && sat_b)
        return (a < 0) == (b < 0) ? clip : -clip;
    if (sat_a)
        return a < 0 ? -b : b;
    if (sat_b)
        return b < 0 ? -a : a;

    const double mag_a = std::abs(a);
    const double mag_b = std::abs(b);
    const double sign = ((a < 0) != (b < 0)) ? -1.0 : 1.0;
    double r;
    if (mode == CheckNode::min_sum) {
        r = alpha * sign * std::min(mag_a, mag_b);
    } else {
        // sign*min + log1p(e^-|a+b|) - log1p(e^-|a-b|), the stable form of
        // 2 atanh(tanh(a/2) tanh(b/2)).
        r = sign * std::min(mag_a, mag_b) + std::log1p(std::exp(-std::abs(a + b))) -
            std::log1p(std::exp(-std::abs(a - b)));
    }
    return std::clamp(r, -clip, clip);
}

PeOutputs pe_update(double l_upper_right, double l_lower_right,
                    double r_upper_left, double r_lower_left,
                    double clip, CheckNode mode, double alpha)
{
    PeOutputs out;
    out.l_upper = boxplus(l_upper_right, l_lower_right + r_lower_left, clip, mode, alpha);
    out.l_lower = std::clamp(boxplus(r_upper_left, l_upper_right, clip, mode, alpha) +
                                 l_lower_right,
                             -clip, clip);
    out.r_upper = boxplus(r_upper_left, l_lower_right + r_lower_left, clip, mode, alpha);
    out.r_lower = std::clamp(boxplus(r_upper_left, l_upper_right, clip, mode, alpha) +
                                 r_lower_left,
                             -clip, clip);
    return out;
}

MessageMemory init_messages(std::span<const double> llr_ch, const PolarCode& code, double clip)
{
    if (llr_ch.size() != code.block_length)
        throw std::invalid_argument("channel LLR vector must have length N");
    MessageMemory mem;
    mem.rows = code.block_length;
    mem.cols = code.stages + 1;
    mem.clip = clip;
    mem.left.assign(static_cast<std::size_t>(mem.rows) * mem.cols, 0.0);
    mem.right.assign(static_cast<std::size_t>(mem.rows) * mem.cols, 0.0);
    for (std::uint32_t i = 0; i < mem.rows; ++i) {
        mem.r(0, i) = code.is_info[i] ? 0.0 : clip;
        mem.l(code.stages, i) = std::clamp(llr_ch[i], -clip, clip);
    }
    return mem;
}

std::uint64_t bp_run_iteration(MessageMemory& mem, const StagePermutation& perm,
                               const BpOptions& opt)
{
    const std::uint32_t rows = mem.rows;
    const unsigned n = mem.cols - 1;
    const double clip = opt.clip;
    const CheckNode mode = opt.check_node;
    const double alpha = opt.min_sum_alpha;
    std::uint64_t pe_count = 0;

    // Right-going sweep, stage 1 -> n.
    for (unsigned t = 0; t < n; ++t) {
        const std::uint32_t sep = perm.s[t];
        const double* lcol = mem.left.data() + static_cast<std::size_t>(t + 1) * rows;
        const double* rcol = mem.right.data() + static_cast<std::size_t>(t) * rows;
        double* rout = mem.right.data() + static_cast<std::size_t>(t + 1) * rows;
        for (std::uint32_t i = 0; i < rows; ++i) {
            if (i & sep)
                continue;
            const std::uint32_t lo = i + sep;
            rout[i] = boxplus(rcol[i], lcol[lo] + rcol[lo], clip, mode, alpha);
            rout[lo] = std::clamp(boxplus(rcol[i], lcol[i], clip, mode, alpha) + rcol[lo],
                                  -clip, clip);
            ++pe_count;
        }
    }
    // Left-going sweep, stage n -> 1.
    for (unsigned t = n; t-- > 0;) {
        const std::uint32_t sep = perm.s[t];
        const double* lcol = mem.left.data() + static_cast<std::size_t>(t + 1) * rows;
        const double* rcol = mem.right.data() + static_cast<std::size_t>(t) * rows;
        double* lout = mem.left.data() + static_cast<std::size_t>(t) * rows;
        for (std::uint32_t i = 0; i < rows; ++i) {
            if (i & sep)
                continue;
            const std::uint32_t lo = i + sep;
            lout[i] = boxplus(lcol[i], lcol[lo] + rcol[lo], clip, mode, alpha);
            lout[lo] = std::clamp(boxplus(rcol[i], lcol[i], clip, mode, alpha) + lcol[lo],
                                  -clip, clip);
            ++pe_count;
        }
    }
    return pe_count;
}

void bp_hard_decisions(const MessageMemory& mem, const PolarCode& code,
                       BitVector& u_hat, BitVector& x_hat)
{
    const std::uint32_t rows = mem.rows;
    const unsigned n = mem.cols - 1;
    u_hat.assign(rows, 0);
    x_hat.assign(rows, 0);
    for (std::uint32_t i = 0; i < rows; ++i) {
        if (code.is_info[i])
            u_hat[i] = (mem.l(0, i) + mem.r(0, i) < 0.0) ? 1 : 0;
        x_hat[i] = (mem.l(n, i) + mem.r(n, i) < 0.0) ? 1 : 0;
    }
}

DecodeCandidate bp_decode(std::span<const double> llr_ch, const PolarCode& code,
                          const StagePermutation& perm, const BpOptions& opt)
{
    if (perm.pi.size() != code.stages)
        throw std::invalid_argument("permutation length must equal log2(N)");
    if (opt.stop == StopRule::crc && !code.crc)
        throw std::invalid_argument("CRC stopping requires a CRC-configured code");

    MessageMemory mem = init_messages(llr_ch, code, opt.clip);
    DecodeCandidate cand;
    BitVector u_hat, x_hat;
    for (unsigned it = 0; it < opt.max_iterations; ++it) {
        cand.pe_updates += bp_run_iteration(mem, perm, opt);
        cand.iterations = it + 1;
        bp_hard_decisions(mem, code, u_hat, x_hat);
        if (opt.stop == StopRule::g_matrix) {
            if (g_matrix_check(u_hat, x_hat, code))
                break;
        } else if (opt.stop == StopRule::crc) {
            if (crc_check(extract_info(u_hat, code), *code.crc))
                break;
        }
    }
    if (opt.max_iterations == 0)
        bp_hard_decisions(mem, code, u_hat, x_hat);
    cand.valid = g_matrix_check(u_hat, x_hat, code);
    cand.u_hat = std::move(u_hat);
    cand.x_hat = std::move(x_hat);
    return cand;
}

}  // namespace polarium
