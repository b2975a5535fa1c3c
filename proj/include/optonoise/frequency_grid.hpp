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
#include <optional>
#include <span>
#include <vector>

namespace optonoise {

/// Which physical frequency axis a grid samples.
enum class Band {
    /// Offset from the optical carrier, equal to the mechanical frequency
    /// variable of the monochromatic scheme.
    Absolute,
    /// Rotating-frame offset from the mechanical resonance.
    Baseband,
};

/// Ordered, strictly increasing samples symmetric about zero.
///
/// Point `j` and point `mirror(j)` are exact negatives of each other, so
/// evaluating a coefficient at -W is an index lookup.
class FrequencyGrid {
  public:
    /// `points` samples spread uniformly over [-half_span, half_span].
    /// `points` must be odd so the grid contains zero.
    static FrequencyGrid uniform(double half_span, std::size_t points, Band band);

    /// Builds the symmetric closure of a set of non-negative frequencies.
    /// Input must be strictly increasing; a leading zero is kept once.
    static FrequencyGrid mirrored(std::span<const double> non_negative, Band band);

    std::size_t size() const noexcept { return omega_.size(); }
    double operator[](std::size_t j) const noexcept { return omega_[j]; }
    std::span<const double> values() const noexcept { return omega_; }
    Band band() const noexcept { return band_; }

    std::size_t mirror(std::size_t j) const noexcept { return omega_.size() - 1 - j; }

    /// Index of the sample closest to `omega` if it lies within `tolerance`.
    std::optional<std::size_t> find(double omega, double tolerance = 0.0) const;

    /// Indices of the non-negative half, in increasing frequency.
    std::vector<std::size_t> non_negative_indices() const;

    bool operator==(const FrequencyGrid &) const = default;

  private:
    FrequencyGrid(std::vector<double> omega, Band band);

    std::vector<double> omega_;
    Band band_;
};

} // namespace optonoise
