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

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace optonoise {

/// Where a channel's fluctuations come from.
enum class ChannelRole {
    Optical, ///< input field sideband, vacuum fluctuations
    Bath,    ///< mechanical bath feeding the fluctuation force
};

struct Vacuum {
    bool operator==(const Vacuum &) const = default;
};

/// Thermal statistics. `occupation` applies at every grid point unless a
/// per-point `profile` is supplied (frequency-dependent mode).
struct Thermal {
    double occupation = 0.0;
    std::vector<double> profile;

    bool operator==(const Thermal &) const = default;
};

using ChannelStats = std::variant<Vacuum, Thermal>;

/// Port name plus carrier offset in units of the mechanical frequency.
struct ChannelId {
    std::string port;
    double carrier_offset = 0.0;

    bool operator==(const ChannelId &) const = default;
};

/// One input operator pair: a(W) at +W and a^+(-W) at -W.
struct NoiseChannel {
    ChannelId id;
    ChannelRole role = ChannelRole::Optical;
    ChannelStats stats = Vacuum{};

    /// Symmetrized weight (n + 1/2, or 1/2 for vacuum) at grid point `j`.
    double weight(std::size_t j) const;

    std::string label() const;

    bool operator==(const NoiseChannel &) const = default;
};

/// Ordered set of statistically independent channels with unique ids.
class ChannelBasis {
  public:
    explicit ChannelBasis(std::vector<NoiseChannel> channels);

    std::size_t size() const noexcept { return channels_.size(); }
    const NoiseChannel &operator[](std::size_t i) const noexcept { return channels_[i]; }
    auto begin() const noexcept { return channels_.begin(); }
    auto end() const noexcept { return channels_.end(); }

    /// Index of the channel with the given port name; throws if absent.
    std::size_t index_of(const std::string &port) const;

    bool operator==(const ChannelBasis &) const = default;

  private:
    std::vector<NoiseChannel> channels_;
};

} // namespace optonoise
