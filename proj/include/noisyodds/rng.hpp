#pragma once

#include <array>
#include <cstdint>

namespace noisyodds::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32-10 block function, as in Random123. Pure: the same
/// (counter, key) pair always yields the same four words.
Counter philox4x32(Counter counter, Key key) noexcept;

/// Random substream for one trial. The trial id and the master seed form the
/// counter and key, so each trial draws the same numbers whether trials run
/// serially or spread across threads.
class TrialStream {
public:
    TrialStream(std::uint64_t master_seed, std::uint64_t trial_id) noexcept;

    /// Uniform double on [0, 1) with 53 random bits.
    double uniform() noexcept;

    std::uint64_t next_u64() noexcept;

private:
    Key key_;
    Counter counter_;
    Counter block_{};
    int used_ = 4;
};

/// Uniform on [0, 1) from the top 53 bits of a 64-bit word.
constexpr double to_unit(std::uint64_t bits) noexcept
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace noisyodds::rng
