// Copyright 2026 The optonoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace optonoise {

/// SplitMix64 finalizer, used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of sub-stream (trajectory, stream) under a master seed. Streams of
/// different channels never share state, so changing the force or one
/// channel's statistics leaves every other draw untouched.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t trajectory, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(splitmix64(master) ^ trajectory) ^ (stream * 0xd1b54a32d192ed03ULL));
}

/// Gaussian sample stream with a fixed standard deviation.
class GaussianStream {
  public:
    GaussianStream(std::uint64_t seed, double sigma) : engine_(seed), sigma_(sigma) {}

    double operator()() { return sigma_ == 0.0 ? 0.0 : sigma_ * unit_(engine_); }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> unit_{0.0, 1.0};
    double sigma_;
};

} // namespace optonoise
