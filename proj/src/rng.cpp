#include "noisyodds/rng.hpp"

namespace noisyodds::rng {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept
{
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

inline Counter round(const Counter& ctr, const Key& key) noexcept
{
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

Counter philox4x32(Counter counter, Key key) noexcept
{
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        counter = round(counter, key);
    }
    return counter;
}

TrialStream::TrialStream(std::uint64_t master_seed, std::uint64_t trial_id) noexcept
    : key_{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)},
      counter_{0u, 0u, static_cast<std::uint32_t>(trial_id), static_cast<std::uint32_t>(trial_id >> 32)}
{
}

std::uint64_t TrialStream::next_u64() noexcept
{
    if (used_ >= 4) {
        block_ = philox4x32(counter_, key_);
        ++counter_[0];
        if (counter_[0] == 0) {
            ++counter_[1];
        }
        used_ = 0;
    }
    const std::uint64_t hi = block_[used_];
    const std::uint64_t lo = block_[used_ + 1];
    used_ += 2;
    return (hi << 32) | lo;
}

double TrialStream::uniform() noexcept
{
    return to_unit(next_u64());
}

}  // namespace noisyodds::rng
