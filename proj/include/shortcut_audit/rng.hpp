// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

namespace shortcut_audit {

/// Counter-based Philox4x64-10 generator (Salmon et al., Random123; the
/// same generator numpy exposes as numpy.random.Philox).
///
/// The 256-bit counter is laid out as {block, block-carry, substream,
/// domain} and the 128-bit key as {seed, stream}. Distinct (seed, stream,
/// substream, domain) tuples yield independent streams, so parallel
/// consumers draw from disjoint sequences regardless of scheduling.
class Philox4x64 {
public:
    Philox4x64(std::uint64_t key0, std::uint64_t key1,
               std::uint64_t substream = 0, std::uint64_t domain = 0)
        : key_{key0, key1}, counter_{0, 0, substream, domain} {}

    /// Raw 64-bit output.
    std::uint64_t next_u64() {
        if (buffer_pos_ == 4) refill();
        return buffer_[buffer_pos_++];
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double strictly inside (0, 1).
    double next_open_double() {
        return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
    }

    /// Standard normal draw via the inverse CDF.
    double next_normal();

    /// Uniform integer in [0, bound) via 128-bit multiply reduction.
    std::uint64_t next_below(std::uint64_t bound) {
        using u128 = unsigned __int128;
        return static_cast<std::uint64_t>((static_cast<u128>(next_u64()) * bound) >> 64);
    }

    static std::array<std::uint64_t, 4> block(const std::array<std::uint64_t, 4>& counter,
                                              const std::array<std::uint64_t, 2>& key);

private:
    void refill() {
        buffer_ = block(counter_, key_);
        if (++counter_[0] == 0) ++counter_[1];
        buffer_pos_ = 0;
    }

    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> counter_;
    std::array<std::uint64_t, 4> buffer_{};
    int buffer_pos_ = 4;
};

/// Domain tags keeping unrelated consumers of the same user seed apart.
namespace rng_domain {
inline constexpr std::uint64_t kBootstrap = 1;
inline constexpr std::uint64_t kBinormal = 2;
inline constexpr std::uint64_t kSweep = 3;
inline constexpr std::uint64_t kComposition = 4;
inline constexpr std::uint64_t kMitigation = 5;
inline constexpr std::uint64_t kTest = 99;
}  // namespace rng_domain

/// Deterministically derives an independent seed for a named sub-task.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return Philox4x64::block({tag, 0, 0, 0}, {seed, 0})[0];
}

/// Stream `stream` of the generator seeded with `seed`.
class RngStream : public Philox4x64 {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream,
              std::uint64_t substream = 0, std::uint64_t domain = 0)
        : Philox4x64(seed, stream, substream, domain) {}
};

}  // namespace shortcut_audit
