#pragma once

// Counter-based random streams.
//
// Every stochastic quantity in the engine is drawn from a stream whose
// identity is derived from (master seed, domain, trial, entity, sub-entity).
// Streams are Philox4x32-10 blocks indexed by a 32-bit block counter, so a
// draw never depends on which thread produced it or in what order entities
// were visited.

#include <array>
#include <cstdint>

namespace outval
{

/// Philox4x32-10 block function (Salmon et al., SC'11).
struct Philox4x32
{
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) noexcept;
};

/// Separates the purposes streams are used for.
enum class StreamDomain : std::uint32_t
{
    generic = 0,
    population = 1,
    isolation = 2,
    shed = 3,
    occupant = 4,
    building_damage = 5,
};

struct StreamId
{
    StreamDomain domain = StreamDomain::generic;
    std::uint32_t trial = 0;
    std::uint32_t entity = 0;
    std::uint32_t sub = 0;  // must fit in 24 bits
};

class RandomStream
{
  public:
    RandomStream(std::uint64_t seed, StreamId id) noexcept;

    std::uint32_t next_u32() noexcept;
    std::uint64_t next_u64() noexcept;

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform() noexcept;
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    bool bernoulli(double p) noexcept { return uniform() < p; }
    /// Uniform integer in [0, n), unbiased. n must be > 0.
    std::uint64_t index(std::uint64_t n) noexcept;
    /// Standard normal via the Marsaglia polar method.
    double normal() noexcept;

  private:
    void refill() noexcept;

    Philox4x32::Key key_;
    Philox4x32::Counter ctr_;
    Philox4x32::Counter block_{};
    int used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace outval
