#include "outval/rng.hpp"

#include <cmath>

namespace outval
{

namespace
{
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;
constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) noexcept
{
    std::uint64_t const p = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(p);
    hi = static_cast<std::uint32_t>(p >> 32);
}
}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) noexcept
{
    for (int round = 0; round < 10; ++round)
    {
        if (round > 0)
        {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        std::uint32_t lo0, hi0, lo1, hi1;
        mulhilo(kPhiloxM0, ctr[0], lo0, hi0);
        mulhilo(kPhiloxM1, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

RandomStream::RandomStream(std::uint64_t seed, StreamId id) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      ctr_{0u, id.trial, id.entity,
           (static_cast<std::uint32_t>(id.domain) << 24) | (id.sub & 0x00FFFFFFu)}
{
}

void RandomStream::refill() noexcept
{
    block_ = Philox4x32::generate(ctr_, key_);
    ++ctr_[0];
    used_ = 0;
}

std::uint32_t RandomStream::next_u32() noexcept
{
    if (used_ == 4)
    {
        refill();
    }
    return block_[used_++];
}

std::uint64_t RandomStream::next_u64() noexcept
{
    std::uint64_t const hi = next_u32();
    return (hi << 32) | next_u32();
}

double RandomStream::uniform() noexcept
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

__extension__ using uint128 = unsigned __int128;

std::uint64_t RandomStream::index(std::uint64_t n) noexcept
{
    // Lemire's nearly-divisionless method on 64-bit words.
    std::uint64_t x = next_u64();
    uint128 m = static_cast<uint128>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n)
    {
        std::uint64_t const threshold = (0 - n) % n;
        while (low < threshold)
        {
            x = next_u64();
            m = static_cast<uint128>(x) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double RandomStream::normal() noexcept
{
    if (has_spare_)
    {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do
    {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double const f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

}  // namespace outval
