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

#include "optonoise/noise_channel.hpp"

#include <cmath>
#include <sstream>

#include "optonoise/convention.hpp"
#include "optonoise/errors.hpp"

namespace optonoise {

double NoiseChannel::weight(std::size_t j) const {
    if (const auto *thermal = std::get_if<Thermal>(&stats)) {
        const double n = thermal->profile.empty() ? thermal->occupation : thermal->profile.at(j);
        return convention::thermal_weight(n);
    }
    return convention::kVacuumWeight;
}

std::string NoiseChannel::label() const {
    std::ostringstream os;
    os << id.port;
    if (id.carrier_offset != 0.0) {
        os << "@" << (id.carrier_offset > 0 ? "+" : "") << id.carrier_offset;
    }
    return os.str();
}

ChannelBasis::ChannelBasis(std::vector<NoiseChannel> channels) : channels_(std::move(channels)) {
    for (std::size_t i = 0; i < channels_.size(); ++i) {
        if (const auto *thermal = std::get_if<Thermal>(&channels_[i].stats)) {
            if (!(thermal->occupation >= 0.0) || !std::isfinite(thermal->occupation)) {
                throw DomainError("thermal occupation must be finite and >= 0 for channel " +
                                  channels_[i].label());
            }
            for (double n : thermal->profile) {
                if (!(n >= 0.0) || !std::isfinite(n)) {
                    throw DomainError("thermal occupation profile must be finite and >= 0");
                }
            }
        }
        for (std::size_t k = 0; k < i; ++k) {
            if (channels_[k].id == channels_[i].id) {
                throw StructuralError("duplicate channel id " + channels_[i].label());
            }
        }
    }
}

std::size_t ChannelBasis::index_of(const std::string &port) const {
    for (std::size_t i = 0; i < channels_.size(); ++i) {
        if (channels_[i].id.port == port) {
            return i;
        }
    }
    throw StructuralError("no channel named " + port);
}

} // namespace optonoise
