#ifndef ROBUSTCI_RNG_HPP
#define ROBUSTCI_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>

namespace robustci {

// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

// Counter-based stream addressed by (seed, stream, lane, draw).
// The seed is the Philox key; the counter words are
// (block, lane, stream low, stream high), and each block yields two 64-bit draws.
// Draw d of a stream is therefore a pure function of its address.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint32_t lane = 0,
               std::uint64_t position = 0) noexcept
        : seed_(seed), stream_(stream), lane_(lane), draw_(position) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return at(draw_++); }
    // The 64-bit word at a given draw index, without moving the cursor.
    result_type at(std::uint64_t draw) const noexcept;
    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return to_unit(operator()()); }

    // Independent stream sharing seed, stream id and current position.
    CounterRng lane(std::uint32_t lane) const noexcept {
        return CounterRng(seed_, stream_, lane, draw_);
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }
    std::uint64_t position() const noexcept { return draw_; }

    static double to_unit(result_type x) noexcept {
        return static_cast<double>(x >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint32_t lane_;
    std::uint64_t draw_;
};

}  // namespace robustci

#endif
