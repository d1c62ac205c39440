#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polarium/bits.hpp"

namespace polarium {

// SplitMix64: the per-frame random stream used throughout the simulator.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in (0, 1].
    double next_unit()
    {
        return (static_cast<double>(next() >> 11) + 1.0) * (1.0 / 9007199254740992.0);
    }

private:
    std::uint64_t state_;
};

// Mixes (master, a, b) into one stream seed, so per-frame streams are
// independent of processing order and thread count.
std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

// One deterministic random stream per frame: payload bits and Gaussian noise.
// Gaussians come from the basic Box-Muller transform (two uniforms per pair,
// no rejection), pinned so equal seeds give byte-identical sequences.
class FrameRng {
public:
    explicit FrameRng(std::uint64_t seed) : rng_(seed) {}

    std::uint8_t next_bit() { return static_cast<std::uint8_t>(rng_.next() >> 63); }
    std::uint64_t next_u64() { return rng_.next(); }
    double next_gaussian();

private:
    SplitMix64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Noise standard deviation for BPSK over AWGN at the given Eb/N0 (dB) and
// code rate R: sigma = sqrt(1 / (2 R 10^(ebn0/10))). Throws when R <= 0.
double sigma_from_ebn0(double ebn0_db, double rate);

// 0 -> +1.0, 1 -> -1.0
std::vector<double> bpsk_modulate(const BitVector& x);

std::vector<double> awgn(std::span<const double> s, double sigma, FrameRng& rng);

// llr_i = 2 y_i / sigma^2; sigma == 0 degenerates to +/-clip by sign(y).
std::vector<double> llr_from_channel(std::span<const double> y, double sigma,
                                     double clip = 40.0);

}  // namespace polarium
