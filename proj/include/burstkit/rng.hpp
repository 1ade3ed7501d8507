/*
   Copyright 2026 The burstkit Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace burstkit {

__extension__ using uint128 = unsigned __int128;

/// Philox4x64-10 counter-based block cipher (Salmon et al., SC'11).
struct Philox4x64 {
    using Counter = std::array<std::uint64_t, 4>;
    using Key = std::array<std::uint64_t, 2>;

    static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
    static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
    static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

    static Counter block(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const uint128 p0 = static_cast<uint128>(kMul0) * ctr[0];
            const uint128 p1 = static_cast<uint128>(kMul1) * ctr[2];
            const auto hi0 = static_cast<std::uint64_t>(p0 >> 64);
            const auto lo0 = static_cast<std::uint64_t>(p0);
            const auto hi1 = static_cast<std::uint64_t>(p1 >> 64);
            const auto lo1 = static_cast<std::uint64_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

/// Reproducible random stream addressed by (master seed, stream, substream).
///
/// Streams never share state: the stream and substream indices occupy their
/// own counter words, and only the block word advances while drawing. The
/// result is independent of which thread draws it or in which order streams
/// are created.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t master_seed, std::uint64_t stream = 0,
                          std::uint64_t substream = 0) noexcept
        : key_{master_seed, 0}, counter_{0, substream, stream, 0} {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept {
        if (pos_ == 4) {
            buffer_ = Philox4x64::block(counter_, key_);
            ++counter_[0];
            pos_ = 0;
        }
        return buffer_[pos_++];
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    /// Uniform on the open interval (0, 1).
    double uniform_open() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Exponential with the given rate (> 0); never returns 0.
    double exponential(double rate) noexcept { return -std::log(uniform_open()) / rate; }

    std::uint64_t blocks_drawn() const noexcept { return counter_[0]; }

private:
    Philox4x64::Key key_;
    Philox4x64::Counter counter_;
    Philox4x64::Counter buffer_{};
    int pos_ = 4;
};

}  // namespace burstkit
