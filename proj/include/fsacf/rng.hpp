#pragma once

#include <array>
#include <cstdint>

namespace fsacf {

/// Philox4x32-10 counter-based block cipher (Salmon et al., SC'11).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

[[nodiscard]] PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/**
 * @brief Reproducible variate stream keyed by (master seed, replication, substream).
 *
 * The key is the 64-bit master seed; the counter is
 * (draw index low, draw index high, replication, substream). Streams with
 * different (replication, substream) never share a counter value.
 */
class RandomStream {
public:
    RandomStream(std::uint64_t master, std::uint32_t replication, std::uint32_t substream = 0) noexcept;

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() noexcept;
    /// Standard normal by inverse CDF.
    double normal();
    /// Standard Cauchy, tan(pi (U - 1/2)).
    double cauchy() noexcept;
    /// Exponential with mean 1, -ln U.
    double exponential() noexcept;

    [[nodiscard]] std::uint64_t draws() const noexcept { return draw_; }

private:
    PhiloxKey key_;
    std::uint32_t replication_;
    std::uint32_t substream_;
    std::uint64_t block_ = 0;
    std::uint64_t draw_ = 0;
    PhiloxCounter buffer_{};
    int available_ = 0;
};

struct Seed {
    std::uint64_t master = 0;

    [[nodiscard]] RandomStream stream(std::uint32_t replication, std::uint32_t substream = 0) const noexcept {
        return RandomStream(master, replication, substream);
    }
};

}  // namespace fsacf
