#include "polarium/bpl.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "polarium/channel.hpp"

namespace polarium {

namespace {

// n! saturated so list-size bounds stay meaningful for any n.
std::uint64_t factorial_capped(unsigned n)
{
    std::uint64_t f = 1;
    for (unsigned i = 2; i <= n; ++i) {
        if (f > UINT64_MAX / i)
            return UINT64_MAX;
        f *= i;
    }
    return f;
}

std::vector<unsigned> left_cyclic_shift(const std::vector<unsigned>& pi, unsigned by)
{
    const unsigned n = static_cast<unsigned>(pi.size());
    std::vector<unsigned> out(n);
    for (unsigned j = 0; j < n; ++j)
        out[j] = pi[(j + by) % n];
    return out;
}

}  // namespace

std::vector<StagePermutation> select_permutations(unsigned stages, unsigned list_size,
                                                  std::uint64_t seed)
{
    if (stages == 0)
        throw std::invalid_argument("stage count must be positive");
    if (list_size < 1)
        throw std::invalid_argument("list size must be at least 1");
    if (list_size > factorial_capped(stages))
        throw std::invalid_argument("list size exceeds the n! distinct permutations");

    std::vector<unsigned> identity(stages);
    for (unsigned j = 0; j < stages; ++j)
        identity[j] = j + 1;

    std::vector<StagePermutation> out;
    std::set<std::vector<unsigned>> used;
    auto push = [&](std::vector<unsigned> pi) {
        if (used.insert(pi).second)
            out.push_back(make_permutation(std::move(pi)));
    };

    push(identity);
    for (unsigned shift = 1; shift < stages && out.size() < list_size; ++shift)
        push(left_cyclic_shift(identity, shift));

    // Seeded Fisher-Yates fill, drawn without replacement.
    SplitMix64 rng(seed);
    while (out.size() < list_size) {
        std::vector<unsigned> pi = identity;
        for (unsigned j = stages - 1; j > 0; --j) {
            const unsigned swap_with = static_cast<unsigned>(rng.next() % (j + 1));
            std::swap(pi[j], pi[swap_with]);
        }
        push(std::move(pi));
    }
    out.resize(std::min<std::size_t>(out.size(), list_size));
    return out;
}

std::pair<std::size_t, double> euclidean_select(std::span<const double> y,
                                                const std::vector<BitVector>& candidates)
{
    if (candidates.empty())
        throw std::invalid_argument("candidate set is empty");
    std::size_t best = 0;
    double best_sq = -1.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const BitVector& x = candidates[c];
        if (x.size() != y.size())
            throw std::invalid_argument("candidate length does not match y");
        double sq = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double diff = y[i] - (x[i] ? -1.0 : 1.0);
            sq += diff * diff;
        }
        if (best_sq < 0.0 || sq < best_sq) {
            best_sq = sq;
            best = c;
        }
    }
    return {best, std::sqrt(best_sq)};
}

BplResult bpl_decode(std::span<const double> y, std::span<const double> llr_ch,
                     const PolarCode& code, const BplConfig& cfg)
{
    const auto perms = select_permutations(code.stages, cfg.list_size, cfg.permutation_seed);
    BpOptions opt;
    opt.max_iterations = cfg.max_iterations;
    opt.clip = cfg.clip;
    opt.check_node = cfg.check_node;
    opt.min_sum_alpha = cfg.min_sum_alpha;
    opt.stop = StopRule::g_matrix;

    BplResult result;
    result.candidates.reserve(perms.size());
    for (const auto& perm : perms)
        result.candidates.push_back(bp_decode(llr_ch, code, perm, opt));

    std::vector<std::size_t> valid_indices;
    for (std::size_t i = 0; i < result.candidates.size(); ++i)
        if (result.candidates[i].valid)
            valid_indices.push_back(i);

    auto distance_to = [&](const BitVector& x) {
        double sq = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double diff = y[i] - (x[i] ? -1.0 : 1.0);
            sq += diff * diff;
        }
        return std::sqrt(sq);
    };

    result.distances.resize(result.candidates.size());
    if (!valid_indices.empty()) {
        result.any_valid = true;
        for (std::size_t i = 0; i < result.candidates.size(); ++i)
            result.distances[i] = distance_to(result.candidates[i].x_hat);
        std::vector<BitVector> valid_words;
        valid_words.reserve(valid_indices.size());
        for (auto i : valid_indices)
            valid_words.push_back(result.candidates[i].x_hat);
        auto [within, dist] = euclidean_select(y, valid_words);
        (void)dist;
        result.selected_index = valid_indices[within];
        result.x_hat = result.candidates[result.selected_index].x_hat;
    } else {
        // No decoder converged: re-encode every u_hat so the output is still
        // a codeword, and pick the closest.
        result.any_valid = false;
        std::vector<BitVector> reencoded;
        reencoded.reserve(result.candidates.size());
        for (const auto& cand : result.candidates)
            reencoded.push_back(encode(cand.u_hat, code));
        for (std::size_t i = 0; i < reencoded.size(); ++i)
            result.distances[i] = distance_to(reencoded[i]);
        auto [index, dist] = euclidean_select(y, reencoded);
        (void)dist;
        result.selected_index = index;
        result.x_hat = std::move(reencoded[index]);
    }
    result.u_hat = result.candidates[result.selected_index].u_hat;
    return result;
}

}  // namespace polarium
