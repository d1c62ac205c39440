#include "polarium/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polarium {

namespace {

std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b)
{
    std::uint64_t s = master;
    s = mix64(s ^ mix64(a + 0x9E3779B97F4A7C15ULL));
    s = mix64(s ^ mix64(b + 0xD1B54A32D192ED03ULL));
    return s;
}

double FrameRng::next_gaussian()
{
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = rng_.next_unit();  // (0, 1], so log(u1) is finite
    const double u2 = rng_.next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

double sigma_from_ebn0(double ebn0_db, double rate)
{
    if (!(rate > 0.0))
        throw std::invalid_argument("rate must be positive");
    return std::sqrt(1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0)));
}

std::vector<double> bpsk_modulate(const BitVector& x)
{
    std::vector<double> s(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        s[i] = x[i] ? -1.0 : 1.0;
    return s;
}

std::vector<double> awgn(std::span<const double> s, double sigma, FrameRng& rng)
{
    std::vector<double> y(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        y[i] = s[i] + sigma * rng.next_gaussian();
    return y;
}

std::vector<double> llr_from_channel(std::span<const double> y, double sigma, double clip)
{
    std::vector<double> llr(y.size());
    if (sigma == 0.0) {
        for (std::size_t i = 0; i < y.size(); ++i)
            llr[i] = y[i] > 0.0 ? clip : (y[i] < 0.0 ? -clip : 0.0);
        return llr;
    }
    const double scale = 2.0 / (sigma * sigma);
    for (std::size_t i = 0; i < y.size(); ++i)
        llr[i] = scale * y[i];
    return llr;
}

}  // namespace polarium
