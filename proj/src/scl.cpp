#include "polarium/scl.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace polarium {

double sc_f(double a, double b, double clip)
{
    return boxplus(a, b, clip, CheckNode::exact, 1.0);
}

namespace {

// Path-metric penalty for deciding `bit` against LLR `llr`:
// ln(1 + exp(-(1-2u) llr)), evaluated stably. Always >= 0.
double pm_penalty(double llr, std::uint8_t bit)
{
    const double x = bit ? -llr : llr;
    if (x >= 0.0)
        return std::log1p(std::exp(-x));
    return -x + std::log1p(std::exp(x));
}

BitVector sc_recurse(std::span<const double> llr, std::uint32_t base, const PolarCode& code,
                     BitVector& u_hat, std::uint64_t& ops, double clip)
{
    const std::size_t len = llr.size();
    if (len == 1) {
        const std::uint8_t bit =
            code.is_info[base] ? static_cast<std::uint8_t>(llr[0] < 0.0) : std::uint8_t{0};
        u_hat[base] = bit;
        return {bit};
    }
    const std::size_t half = len / 2;
    std::vector<double> child(half);
    for (std::size_t i = 0; i < half; ++i)
        child[i] = sc_f(llr[i], llr[i + half], clip);
    ops += half;
    BitVector beta_left = sc_recurse(child, base, code, u_hat, ops, clip);
    for (std::size_t i = 0; i < half; ++i)
        child[i] = sc_g(llr[i], llr[i + half], beta_left[i]);
    ops += half;
    BitVector beta_right =
        sc_recurse(child, base + static_cast<std::uint32_t>(half), code, u_hat, ops, clip);
    BitVector beta(len);
    for (std::size_t i = 0; i < half; ++i) {
        beta[i] = beta_left[i] ^ beta_right[i];
        beta[i + half] = beta_right[i];
    }
    return beta;
}

// List-decoder path state: per-depth LLR buffers and the two child partial
// sum buffers per depth, updated leaf by leaf.
struct Path {
    std::vector<std::vector<double>> llr;                   // [d], length N >> d
    std::vector<std::array<BitVector, 2>> beta;             // [d][child slot]
    BitVector u;
    double pm = 0.0;
};

Path make_path(std::span<const double> llr_ch, unsigned stages)
{
    Path p;
    p.llr.resize(stages + 1);
    p.beta.resize(stages + 1);
    const std::size_t block = llr_ch.size();
    for (unsigned d = 0; d <= stages; ++d) {
        const std::size_t len = block >> d;
        p.llr[d].resize(len);
        p.beta[d][0].resize(len);
        p.beta[d][1].resize(len);
    }
    std::copy(llr_ch.begin(), llr_ch.end(), p.llr[0].begin());
    p.u.assign(block, 0);
    return p;
}

// Recomputes the LLR buffers for leaf phi, reusing everything still fresh
// from the previous leaf.
void compute_leaf_llrs(Path& path, std::uint32_t phi, unsigned stages, double clip,
                       std::uint64_t& ops)
{
    unsigned start = stages;
    std::uint32_t idx = phi;
    while (start > 1 && (idx & 1) == 0) {
        --start;
        idx >>= 1;
    }
    const std::size_t block = path.llr[0].size();
    for (unsigned d = start; d <= stages; ++d) {
        const std::size_t len = block >> d;
        const bool right_child = (phi >> (stages - d)) & 1;
        const auto& parent = path.llr[d - 1];
        auto& out = path.llr[d];
        if (right_child) {
            const auto& left_beta = path.beta[d][0];
            for (std::size_t i = 0; i < len; ++i)
                out[i] = sc_g(parent[i], parent[i + len], left_beta[i]);
        } else {
            for (std::size_t i = 0; i < len; ++i)
                out[i] = sc_f(parent[i], parent[i + len], clip);
        }
        ops += len;
    }
}

void set_leaf(Path& path, std::uint32_t phi, unsigned stages, std::uint8_t bit)
{
    path.u[phi] = bit;
    path.beta[stages][phi & 1][0] = bit;
    unsigned d = stages;
    std::uint32_t idx = phi;
    const std::size_t block = path.llr[0].size();
    while (idx & 1) {
        const std::size_t len = block >> d;
        const auto& left = path.beta[d][0];
        const auto& right = path.beta[d][1];
        auto& parent = path.beta[d - 1][(idx >> 1) & 1];
        for (std::size_t i = 0; i < len; ++i) {
            parent[i] = left[i] ^ right[i];
            parent[i + len] = right[i];
        }
        idx >>= 1;
        --d;
    }
}

}  // namespace

ScResult sc_decode(std::span<const double> llr_ch, const PolarCode& code, double clip)
{
    if (llr_ch.size() != code.block_length)
        throw std::invalid_argument("channel LLR vector must have length N");
    ScResult res;
    res.u_hat.assign(code.block_length, 0);
    res.x_hat = sc_recurse(llr_ch, 0, code, res.u_hat, res.node_ops, clip);
    return res;
}

SclResult scl_decode(std::span<const double> llr_ch, const PolarCode& code,
                     unsigned list_size, bool use_crc, double clip)
{
    if (llr_ch.size() != code.block_length)
        throw std::invalid_argument("channel LLR vector must have length N");
    if (list_size < 1)
        throw std::invalid_argument("list size must be at least 1");
    if (use_crc && !code.crc)
        throw std::invalid_argument("CRC selection requires a CRC-configured code");

    const unsigned stages = code.stages;
    std::uint64_t ops = 0;
    std::vector<Path> paths;
    paths.push_back(make_path(llr_ch, stages));

    struct Extension {
        std::size_t parent;
        std::uint8_t bit;
        double pm;
    };
    std::vector<Extension> ext;

    for (std::uint32_t phi = 0; phi < code.block_length; ++phi) {
        for (auto& path : paths)
            compute_leaf_llrs(path, phi, stages, clip, ops);
        if (!code.is_info[phi]) {
            for (auto& path : paths) {
                path.pm += pm_penalty(path.llr[stages][0], 0);
                set_leaf(path, phi, stages, 0);
            }
            continue;
        }
        ext.clear();
        for (std::size_t p = 0; p < paths.size(); ++p) {
            const double leaf = paths[p].llr[stages][0];
            ext.push_back({p, 0, paths[p].pm + pm_penalty(leaf, 0)});
            ext.push_back({p, 1, paths[p].pm + pm_penalty(leaf, 1)});
        }
        if (ext.size() > list_size) {
            std::stable_sort(ext.begin(), ext.end(),
                             [](const Extension& a, const Extension& b) { return a.pm < b.pm; });
            ext.resize(list_size);
        }
        std::vector<Path> next;
        next.reserve(ext.size());
        // A parent may survive into both children; clone lazily, move on the
        // parent's last use.
        std::vector<unsigned> remaining(paths.size(), 0);
        for (const auto& e : ext)
            ++remaining[e.parent];
        for (const auto& e : ext) {
            if (--remaining[e.parent] == 0)
                next.push_back(std::move(paths[e.parent]));
            else
                next.push_back(paths[e.parent]);
            next.back().pm = e.pm;
            set_leaf(next.back(), phi, stages, e.bit);
        }
        paths = std::move(next);
    }

    auto better = [](const Path& a, const Path& b) { return a.pm < b.pm; };
    std::size_t pick = 0;
    bool crc_ok = false;
    if (use_crc) {
        bool found = false;
        for (std::size_t p = 0; p < paths.size(); ++p) {
            if (!crc_check(extract_info(paths[p].u, code), *code.crc))
                continue;
            if (!found || better(paths[p], paths[pick])) {
                pick = p;
                found = true;
            }
        }
        crc_ok = found;
        if (!found)
            for (std::size_t p = 1; p < paths.size(); ++p)
                if (better(paths[p], paths[pick]))
                    pick = p;
    } else {
        for (std::size_t p = 1; p < paths.size(); ++p)
            if (better(paths[p], paths[pick]))
                pick = p;
    }

    SclResult res;
    res.u_hat = std::move(paths[pick].u);
    res.x_hat = std::move(paths[pick].beta[0][0]);
    res.path_metric = paths[pick].pm;
    res.node_ops = ops;
    res.crc_ok = crc_ok;
    return res;
}

BitVector ml_decode_bruteforce(std::span<const double> y, const PolarCode& code)
{
    if (code.info_length > 20)
        throw std::invalid_argument("brute-force decoding requires k <= 20");
    if (y.size() != code.block_length)
        throw std::invalid_argument("y must have length N");
    const std::uint32_t k = code.info_length;
    BitVector payload(k), best;
    double best_sq = -1.0;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
        for (std::uint32_t j = 0; j < k; ++j)
            payload[j] = static_cast<std::uint8_t>((m >> (k - 1 - j)) & 1);
        BitVector x = polar_transform(assemble_u(payload, code));
        double sq = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double diff = y[i] - (x[i] ? -1.0 : 1.0);
            sq += diff * diff;
        }
        if (best_sq < 0.0 || sq < best_sq) {
            best_sq = sq;
            best = std::move(x);
        }
    }
    return best;
}

}  // namespace polarium
