#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "polarium/bpl.hpp"
#include "polarium/channel.hpp"
#include "test_support.hpp"

using namespace polarium;
using testsupport::noiseless_llrs;
using testsupport::random_bits;

namespace {

struct Frame {
    BitVector payload;
    BitVector x;
    std::vector<double> y;
    std::vector<double> llr;
};

Frame make_frame(const PolarCode& code, double ebn0_db, std::uint64_t seed)
{
    Frame f;
    FrameRng rng(derive_stream_seed(seed, 0, 0));
    f.payload.resize(code.info_length);
    for (auto& b : f.payload)
        b = rng.next_bit();
    f.x = encode(assemble_u(f.payload, code), code);
    const double sigma = sigma_from_ebn0(ebn0_db, code.rate());
    f.y = awgn(bpsk_modulate(f.x), sigma, rng);
    f.llr = llr_from_channel(f.y, sigma);
    return f;
}

}  // namespace

TEST_CASE("permutation selection fixtures")
{
    auto three = select_permutations(3, 3, 0);
    REQUIRE(three.size() == 3);
    CHECK(three[0].pi == std::vector<unsigned>{1, 2, 3});
    CHECK(three[1].pi == std::vector<unsigned>{2, 3, 1});
    CHECK(three[2].pi == std::vector<unsigned>{3, 1, 2});

    auto one = select_permutations(3, 1, 0);
    REQUIRE(one.size() == 1);
    CHECK(one[0].pi == std::vector<unsigned>{1, 2, 3});

    auto five = select_permutations(3, 5, 42);
    REQUIRE(five.size() == 5);
    CHECK(five[0].pi == std::vector<unsigned>{1, 2, 3});
    CHECK(five[1].pi == std::vector<unsigned>{2, 3, 1});
    CHECK(five[2].pi == std::vector<unsigned>{3, 1, 2});
    const std::set<std::vector<unsigned>> rest{{1, 3, 2}, {2, 1, 3}, {3, 2, 1}};
    CHECK(rest.count(five[3].pi) == 1);
    CHECK(rest.count(five[4].pi) == 1);
    CHECK(five[3].pi != five[4].pi);

    CHECK(select_permutations(3, 6, 1).size() == 6);
    CHECK_THROWS_AS(select_permutations(3, 7, 0), std::invalid_argument);
    CHECK_THROWS_AS(select_permutations(3, 0, 0), std::invalid_argument);
}

TEST_CASE("permutation selection is deterministic and duplicate free")
{
    auto a = select_permutations(5, 24, 1234);
    auto b = select_permutations(5, 24, 1234);
    REQUIRE(a.size() == 24);
    std::set<std::vector<unsigned>> seen;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].pi == b[i].pi);
        seen.insert(a[i].pi);
    }
    CHECK(seen.size() == 24);

    auto c = select_permutations(5, 24, 99);
    // The first n entries are seed independent.
    for (unsigned i = 0; i < 5; ++i)
        CHECK(a[i].pi == c[i].pi);
}

TEST_CASE("euclidean selection")
{
    std::vector<double> y{0.9, -1.1};
    std::vector<BitVector> cands{{0, 1}, {0, 0}};
    auto [index, dist] = euclidean_select(y, cands);
    CHECK(index == 0);
    CHECK(dist == doctest::Approx(std::sqrt(0.01 + 0.01)));

    std::vector<BitVector> same{{1, 0}, {1, 0}, {1, 0}};
    CHECK(euclidean_select(y, same).first == 0);

    CHECK_THROWS_AS(euclidean_select(y, {}), std::invalid_argument);
    CHECK_THROWS_AS(euclidean_select(y, {{1, 0, 1}}), std::invalid_argument);
}

TEST_CASE("euclidean selection matches the brute-force oracle")
{
    std::mt19937 rng(53);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> y(8);
        for (auto& v : y)
            v = noise(rng);
        std::vector<BitVector> cands;
        for (int c = 0; c < 4; ++c)
            cands.push_back(random_bits(rng, 8));
        CHECK(euclidean_select(y, cands).first ==
              testsupport::nearest_codeword_index(y, cands));
    }
}

TEST_CASE("single-decoder list degenerates to plain bp")
{
    PolarCode code = construct_bhattacharyya(64, 32, 0.5);
    BpOptions opt;
    opt.max_iterations = 60;
    BplConfig cfg;
    cfg.list_size = 1;
    cfg.max_iterations = 60;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        Frame f = make_frame(code, 2.0, seed);
        auto bp = bp_decode(f.llr, code, identity_permutation(6), opt);
        auto bpl = bpl_decode(f.y, f.llr, code, cfg);
        REQUIRE(bpl.candidates.size() == 1);
        CHECK(bpl.candidates[0].u_hat == bp.u_hat);
        CHECK(bpl.candidates[0].x_hat == bp.x_hat);
        CHECK(bpl.candidates[0].valid == bp.valid);
        CHECK(bpl.candidates[0].iterations == bp.iterations);
        CHECK(bpl.u_hat == bp.u_hat);
        CHECK(bpl.any_valid == bp.valid);
    }
}

TEST_CASE("noiseless list decoding returns the transmitted codeword")
{
    PolarCode code = construct_bhattacharyya(32, 16, 0.5);
    std::mt19937 rng(59);
    BitVector payload = random_bits(rng, 16);
    BitVector x = encode(assemble_u(payload, code), code);
    BplConfig cfg;
    cfg.list_size = 4;
    auto res = bpl_decode(bpsk_modulate(x), noiseless_llrs(x), code, cfg);
    CHECK(res.any_valid);
    CHECK(res.x_hat == x);
    CHECK(extract_info(res.u_hat, code) == payload);
    for (const auto& cand : res.candidates)
        CHECK(cand.iterations == 1);
}

TEST_CASE("a permuted graph rescues frames the identity graph loses")
{
    PolarCode code = construct_bhattacharyya(64, 32, 0.5);
    BpOptions opt;
    opt.max_iterations = 60;
    BplConfig cfg;
    cfg.list_size = 6;
    cfg.max_iterations = 60;
    bool found = false;
    for (std::uint64_t seed = 0; seed < 500 && !found; ++seed) {
        Frame f = make_frame(code, 2.0, seed);
        auto ident = bp_decode(f.llr, code, identity_permutation(6), opt);
        if (ident.valid)
            continue;
        auto res = bpl_decode(f.y, f.llr, code, cfg);
        if (!res.any_valid)
            continue;
        found = true;
        CHECK_FALSE(res.candidates[0].valid);
        CHECK(res.selected_index > 0);
        CHECK(res.candidates[res.selected_index].valid);
        CHECK(res.x_hat == res.candidates[res.selected_index].x_hat);
        CHECK(g_matrix_check(res.u_hat, res.x_hat, code));
    }
    CHECK(found);
}

TEST_CASE("selection is invariant to decoder completion order")
{
    PolarCode code = construct_bhattacharyya(64, 32, 0.5);
    BplConfig cfg;
    cfg.list_size = 5;
    cfg.max_iterations = 40;
    BpOptions opt;
    opt.max_iterations = 40;
    auto perms = select_permutations(6, 5, 0);
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        Frame f = make_frame(code, 2.5, seed);
        auto res = bpl_decode(f.y, f.llr, code, cfg);

        // Decode in reverse order, then select over the same candidate set.
        std::vector<DecodeCandidate> rev;
        for (std::size_t i = perms.size(); i-- > 0;)
            rev.push_back(bp_decode(f.llr, code, perms[i], opt));
        std::reverse(rev.begin(), rev.end());
        std::vector<BitVector> words;
        std::vector<std::size_t> map;
        for (std::size_t i = 0; i < rev.size(); ++i) {
            if (rev[i].valid) {
                words.push_back(rev[i].x_hat);
                map.push_back(i);
            }
        }
        if (words.empty()) {
            for (std::size_t i = 0; i < rev.size(); ++i)
                words.push_back(encode(rev[i].u_hat, code));
            CHECK(res.x_hat == words[euclidean_select(f.y, words).first]);
        } else {
            CHECK(res.selected_index == map[euclidean_select(f.y, words).first]);
            CHECK(res.x_hat == rev[res.selected_index].x_hat);
        }
    }
}

TEST_CASE("valid results satisfy the consistency check and fallback re-encodes")
{
    PolarCode code = construct_bhattacharyya(64, 32, 0.5);
    BplConfig cfg;
    cfg.list_size = 4;
    cfg.max_iterations = 8;  // small budget so some frames fail
    int fallbacks = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Frame f = make_frame(code, 1.0, seed);
        auto res = bpl_decode(f.y, f.llr, code, cfg);
        if (res.any_valid) {
            CHECK(g_matrix_check(res.u_hat, res.x_hat, code));
        } else {
            ++fallbacks;
            CHECK(res.x_hat == encode(res.u_hat, code));
        }
        REQUIRE(res.distances.size() == 4);
    }
    CHECK(fallbacks > 0);
}

TEST_CASE("larger permutation sets do not hurt the block error rate")
{
    PolarCode code = construct_bhattacharyya(64, 32, 0.5);
    BplConfig small;
    small.list_size = 1;
    small.max_iterations = 40;
    BplConfig big = small;
    big.list_size = 4;
    const int frames = 1200;
    int err_small = 0, err_big = 0;
    for (std::uint64_t seed = 0; seed < frames; ++seed) {
        Frame f = make_frame(code, 2.5, seed);
        auto a = bpl_decode(f.y, f.llr, code, small);
        auto b = bpl_decode(f.y, f.llr, code, big);
        err_small += extract_info(a.u_hat, code) != f.payload;
        err_big += extract_info(b.u_hat, code) != f.payload;
    }
    const double p1 = static_cast<double>(err_small) / frames;
    const double margin = 3.0 * std::sqrt(p1 * (1 - p1) / frames);
    CHECK(static_cast<double>(err_big) / frames <= p1 + margin);
}
