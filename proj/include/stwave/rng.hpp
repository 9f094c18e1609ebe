#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace stwave {

/// Philox4x32-10 counter-based generator. Every output is a pure function of
/// (key, counter), so draws can be addressed by index from any thread.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            ctr = single_round(ctr, key);
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static Counter single_round(const Counter& c, const Key& k) {
        const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// Seeded stream of standard normals addressed by (seed, stream, index).
class GaussianStream {
public:
    GaussianStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    /// Standard normal number `index` of this stream (Box-Muller on one Philox block).
    double operator()(std::uint64_t index) const {
        const auto out = raw(index / 2);
        const double u1 = to_unit_open(out[0], out[1]);
        const double u2 = to_unit_open(out[2], out[3]);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return (index % 2 == 0) ? r * std::cos(angle) : r * std::sin(angle);
    }

    /// Uniform in (0, 1], 53-bit resolution.
    double uniform(std::uint64_t index) const {
        const auto out = raw(index / 2);
        return (index % 2 == 0) ? to_unit_open(out[0], out[1]) : to_unit_open(out[2], out[3]);
    }

    /// Random sign (+1 or -1).
    double sign(std::uint64_t index) const {
        const auto out = raw(index / 128);
        const unsigned bit = static_cast<unsigned>(index % 128);
        return ((out[bit / 32] >> (bit % 32)) & 1u) ? 1.0 : -1.0;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    Philox4x32::Counter raw(std::uint64_t block_index) const {
        const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_index),
                                      static_cast<std::uint32_t>(block_index >> 32),
                                      static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
        const Philox4x32::Key key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
        return Philox4x32::block(ctr, key);
    }

    static double to_unit_open(std::uint32_t hi, std::uint32_t lo) {
        const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
};

}  // namespace stwave
