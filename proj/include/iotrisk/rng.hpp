#pragma once

#include <array>
#include <cstdint>

namespace iotrisk {

// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3", SC'11). Stateless: every 128-bit output block
// is a pure function of (key, counter), which is what makes the Monte Carlo
// engine reproducible under any trial scheduling.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter block(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }
};

// One uniform draw on [0,1) for a (seed, stream, index) triple. The engine
// keys streams by trial and indexes draws by asset position, so draw (t, i)
// never depends on how many draws other trials consumed.
inline double uniform_draw(std::uint64_t seed, std::uint64_t stream,
                           std::uint32_t index) noexcept {
    const Philox4x32::Counter ctr = {static_cast<std::uint32_t>(stream),
                                     static_cast<std::uint32_t>(stream >> 32),
                                     index, 0u};
    const Philox4x32::Key key = {static_cast<std::uint32_t>(seed),
                                 static_cast<std::uint32_t>(seed >> 32)};
    const auto out = Philox4x32::block(ctr, key);
    const std::uint64_t bits =
        (std::uint64_t{out[1]} << 32) | std::uint64_t{out[0]};
    // top 53 bits -> double in [0,1)
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace iotrisk
