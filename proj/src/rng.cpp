#include "fsacf/rng.hpp"

#include "fsacf/distributions.hpp"

#include <cmath>
#include <numbers>

namespace fsacf {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

RandomStream::RandomStream(std::uint64_t master, std::uint32_t replication, std::uint32_t substream) noexcept
    : key_{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32)},
      replication_(replication),
      substream_(substream) {}

double RandomStream::uniform() noexcept {
    if (available_ == 0) {
        const PhiloxCounter ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                replication_, substream_};
        buffer_ = philox4x32_10(ctr, key_);
        ++block_;
        available_ = 2;
    }
    const int k = 2 - available_;
    --available_;
    ++draw_;
    const std::uint64_t bits = (static_cast<std::uint64_t>(buffer_[2 * k]) << 32) | buffer_[2 * k + 1];
    // (i + 0.5) / 2^53 lies strictly inside (0, 1)
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() { return normal_quantile(uniform()); }

double RandomStream::cauchy() noexcept { return std::tan(std::numbers::pi * (uniform() - 0.5)); }

double RandomStream::exponential() noexcept { return -std::log(uniform()); }

}  // namespace fsacf
