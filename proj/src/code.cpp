#include "polarium/code.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace polarium {

namespace {

unsigned log2_exact(std::uint32_t n)
{
    if (n < 2 || (n & (n - 1)) != 0)
        throw std::invalid_argument("block length must be a power of two >= 2");
    return static_cast<unsigned>(std::countr_zero(n));
}

// Indices of the k smallest z values; ties go to the higher index. `allowed`
// restricts the choice when non-null.
std::vector<std::uint32_t> pick_most_reliable(const std::vector<double>& z, std::uint32_t k,
                                              const std::vector<std::uint8_t>* allowed)
{
    std::vector<std::uint32_t> order;
    order.reserve(z.size());
    for (std::uint32_t i = 0; i < z.size(); ++i)
        if (!allowed || (*allowed)[i])
            order.push_back(i);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (z[a] != z[b])
            return z[a] < z[b];
        return a > b;
    });
    order.resize(k);
    std::sort(order.begin(), order.end());
    return order;
}

PolarCode finish_code(std::uint32_t block_length, unsigned stages,
                      std::vector<std::uint32_t> info_set, Construction construction,
                      double eps, std::uint32_t d, std::optional<CrcConfig> crc)
{
    PolarCode code;
    code.block_length = block_length;
    code.stages = stages;
    code.info_length = static_cast<std::uint32_t>(info_set.size());
    code.info_set = std::move(info_set);
    code.is_info.assign(block_length, 0);
    for (auto i : code.info_set)
        code.is_info[i] = 1;
    code.construction = construction;
    code.design_eps = eps;
    code.weight_threshold = d;
    code.crc = crc;
    if (crc && code.info_length < crc->width)
        throw std::invalid_argument("k must be at least the CRC width");
    return code;
}

}  // namespace

std::string bits_to_string(const BitVector& bits)
{
    std::string out;
    out.reserve(bits.size());
    for (auto b : bits)
        out.push_back(b ? '1' : '0');
    return out;
}

BitVector bits_from_string(std::string_view text)
{
    BitVector out;
    out.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1')
            throw std::invalid_argument("bit string may contain only 0 and 1");
        out.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return out;
}

std::string construction_name(Construction c)
{
    return c == Construction::bhattacharyya ? "bhattacharyya" : "rm_polar";
}

Construction construction_from_name(std::string_view name)
{
    if (name == "bhattacharyya")
        return Construction::bhattacharyya;
    if (name == "rm_polar" || name == "rm-polar")
        return Construction::rm_polar;
    throw std::invalid_argument("unknown construction: " + std::string(name));
}

std::vector<double> bhattacharyya_parameters(unsigned n, double eps)
{
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("design erasure probability must lie in (0, 1)");
    std::vector<double> z{eps};
    for (unsigned stage = 0; stage < n; ++stage) {
        std::vector<double> next(z.size() * 2);
        for (std::size_t t = 0; t < z.size(); ++t) {
            next[2 * t] = 2.0 * z[t] - z[t] * z[t];  // degraded branch
            next[2 * t + 1] = z[t] * z[t];           // upgraded branch
        }
        z = std::move(next);
    }
    return z;
}

std::uint64_t row_weight(std::uint64_t i, unsigned n)
{
    if (i >= (std::uint64_t{1} << n))
        throw std::invalid_argument("row index out of range");
    return std::uint64_t{1} << std::popcount(i);
}

PolarCode construct_bhattacharyya(std::uint32_t block_length, std::uint32_t info_length,
                                  double eps, std::optional<CrcConfig> crc)
{
    unsigned n = log2_exact(block_length);
    if (info_length > block_length)
        throw std::invalid_argument("k may not exceed N");
    auto z = bhattacharyya_parameters(n, eps);
    auto info = pick_most_reliable(z, info_length, nullptr);
    return finish_code(block_length, n, std::move(info), Construction::bhattacharyya,
                       eps, 0, crc);
}

PolarCode construct_rm_polar(std::uint32_t block_length, std::uint32_t info_length,
                             std::uint32_t weight_threshold, double eps,
                             std::optional<CrcConfig> crc)
{
    unsigned n = log2_exact(block_length);
    if (info_length > block_length)
        throw std::invalid_argument("k may not exceed N");
    std::vector<std::uint8_t> allowed(block_length, 0);
    std::uint32_t surviving = 0;
    for (std::uint32_t i = 0; i < block_length; ++i) {
        if (row_weight(i, n) > weight_threshold) {
            allowed[i] = 1;
            ++surviving;
        }
    }
    if (surviving < info_length)
        throw std::invalid_argument(
            "weight threshold leaves only " + std::to_string(surviving) +
            " candidate rows; maximum feasible k is " + std::to_string(surviving));
    auto z = bhattacharyya_parameters(n, eps);
    auto info = pick_most_reliable(z, info_length, &allowed);
    return finish_code(block_length, n, std::move(info), Construction::rm_polar,
                       eps, weight_threshold, crc);
}

void apply_butterfly_stage(BitVector& bits, std::uint32_t sep)
{
    const std::uint32_t n = static_cast<std::uint32_t>(bits.size());
    for (std::uint32_t i = 0; i < n; ++i)
        if ((i & sep) == 0)
            bits[i] ^= bits[i + sep];
}

void polar_transform_inplace(BitVector& bits)
{
    const auto n = bits.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("transform length must be a power of two");
    for (std::uint32_t sep = 1; sep < n; sep <<= 1)
        apply_butterfly_stage(bits, sep);
}

BitVector polar_transform(BitVector bits)
{
    polar_transform_inplace(bits);
    return bits;
}

BitVector encode(const BitVector& u, const PolarCode& code)
{
    if (u.size() != code.block_length)
        throw std::invalid_argument("u must have length N");
    for (std::uint32_t i = 0; i < code.block_length; ++i)
        if (!code.is_info[i] && u[i] != 0)
            throw std::invalid_argument("frozen position " + std::to_string(i) +
                                        " carries a nonzero bit");
    return polar_transform(u);
}

BitVector assemble_u(const BitVector& payload, const PolarCode& code)
{
    if (payload.size() != code.info_length)
        throw std::invalid_argument("payload must have length k");
    BitVector u(code.block_length, 0);
    for (std::uint32_t j = 0; j < code.info_length; ++j)
        u[code.info_set[j]] = payload[j];
    return u;
}

BitVector extract_info(const BitVector& u, const PolarCode& code)
{
    if (u.size() != code.block_length)
        throw std::invalid_argument("u must have length N");
    BitVector payload(code.info_length);
    for (std::uint32_t j = 0; j < code.info_length; ++j)
        payload[j] = u[code.info_set[j]];
    return payload;
}

bool g_matrix_check(const BitVector& u_hat, const BitVector& x_hat, const PolarCode& code)
{
    if (u_hat.size() != code.block_length || x_hat.size() != code.block_length)
        throw std::invalid_argument("u_hat and x_hat must have length N");
    BitVector u = u_hat;
    for (std::uint32_t i = 0; i < code.block_length; ++i)
        if (!code.is_info[i])
            u[i] = 0;
    return polar_transform(std::move(u)) == x_hat;
}

BitVector crc_checksum(const BitVector& payload, const CrcConfig& cfg)
{
    if (cfg.width == 0 || cfg.width > 32)
        throw std::invalid_argument("CRC width must lie in [1, 32]");
    const std::uint32_t mask = cfg.width == 32 ? 0xFFFFFFFFu : ((1u << cfg.width) - 1u);
    std::uint32_t reg = cfg.init & mask;
    const std::uint32_t top = 1u << (cfg.width - 1);
    for (auto bit : payload) {
        const bool feedback = ((reg & top) != 0) != (bit != 0);
        reg = (reg << 1) & mask;
        if (feedback)
            reg ^= cfg.poly & mask;
    }
    reg ^= cfg.xorout & mask;
    BitVector out(cfg.width);
    for (unsigned j = 0; j < cfg.width; ++j)
        out[j] = static_cast<std::uint8_t>((reg >> (cfg.width - 1 - j)) & 1u);
    return out;
}

BitVector crc_append(const BitVector& payload, const CrcConfig& cfg)
{
    BitVector out = payload;
    BitVector sum = crc_checksum(payload, cfg);
    out.insert(out.end(), sum.begin(), sum.end());
    return out;
}

bool crc_check(const BitVector& word, const CrcConfig& cfg)
{
    if (word.size() < cfg.width)
        throw std::invalid_argument("word shorter than the CRC width");
    BitVector payload(word.begin(), word.end() - cfg.width);
    BitVector expect(word.end() - cfg.width, word.end());
    return crc_checksum(payload, cfg) == expect;
}

std::string code_to_json(const PolarCode& code, int indent)
{
    nlohmann::json j;
    j["N"] = code.block_length;
    j["k"] = code.info_length;
    j["construction"] = construction_name(code.construction);
    j["design_eps"] = code.design_eps;
    j["d"] = code.weight_threshold;
    j["info_set"] = code.info_set;
    if (code.crc) {
        j["crc"] = {{"width", code.crc->width},
                    {"poly", code.crc->poly},
                    {"init", code.crc->init},
                    {"xorout", code.crc->xorout}};
    } else {
        j["crc"] = nullptr;
    }
    return j.dump(indent);
}

PolarCode code_from_json(const std::string& text)
{
    nlohmann::json j = nlohmann::json::parse(text);
    const std::uint32_t block_length = j.at("N").get<std::uint32_t>();
    unsigned n = log2_exact(block_length);
    std::vector<std::uint32_t> info = j.at("info_set").get<std::vector<std::uint32_t>>();
    std::sort(info.begin(), info.end());
    if (std::adjacent_find(info.begin(), info.end()) != info.end())
        throw std::invalid_argument("info_set contains duplicate indices");
    if (!info.empty() && info.back() >= block_length)
        throw std::invalid_argument("info_set index out of range");
    if (j.at("k").get<std::uint32_t>() != info.size())
        throw std::invalid_argument("k does not match the info_set size");
    std::optional<CrcConfig> crc;
    if (j.contains("crc") && !j.at("crc").is_null()) {
        const auto& c = j.at("crc");
        crc = CrcConfig{c.at("width").get<unsigned>(), c.at("poly").get<std::uint32_t>(),
                        c.at("init").get<std::uint32_t>(), c.at("xorout").get<std::uint32_t>()};
    }
    return finish_code(block_length, n, std::move(info),
                       construction_from_name(j.at("construction").get<std::string>()),
                       j.value("design_eps", 0.5), j.value("d", 0u), crc);
}

}  // namespace polarium
