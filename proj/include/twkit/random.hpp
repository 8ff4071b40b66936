#pragma once

#include <cstdint>
#include <limits>

namespace twkit {

/// splitmix64 finalizer; used to key substreams and to expand seeds.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Deterministic random stream identified by (master seed, substream index).
///
/// The generator is xoshiro256**; its 256-bit state is expanded from a
/// splitmix64 chain keyed on both the master seed and the substream index,
/// so substream k is a pure function of (seed, k). Samplers take a stream by
/// reference and never touch global state.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t master_seed, std::uint64_t substream = 0) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;

    /// Standard normal draw (Marsaglia polar method, no cached second variate).
    double normal() noexcept;

    /// Gamma(shape, scale 1) draw by Marsaglia-Tsang squeeze rejection;
    /// shapes below 1 use the U^(1/shape) boost. Requires shape > 0.
    double gamma(double shape);

private:
    std::uint64_t s_[4];
};

}  // namespace twkit
