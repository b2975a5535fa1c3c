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

#include "optonoise/frequency_grid.hpp"

#include <algorithm>
#include <cmath>

#include "optonoise/errors.hpp"

namespace optonoise {

FrequencyGrid::FrequencyGrid(std::vector<double> omega, Band band)
    : omega_(std::move(omega)), band_(band) {
    if (omega_.empty()) {
        throw DomainError("frequency grid is empty");
    }
    for (std::size_t j = 0; j < omega_.size(); ++j) {
        if (!std::isfinite(omega_[j])) {
            throw DomainError("frequency grid contains a non-finite sample");
        }
        if (j > 0 && !(omega_[j] > omega_[j - 1])) {
            throw DomainError("frequency grid must be strictly increasing");
        }
        if (omega_[mirror(j)] != -omega_[j]) {
            throw DomainError("frequency grid must be symmetric about zero");
        }
    }
}

FrequencyGrid FrequencyGrid::uniform(double half_span, std::size_t points, Band band) {
    if (points == 0 || points % 2 == 0) {
        throw DomainError("uniform grid needs an odd, non-zero number of points");
    }
    if (points == 1) {
        return FrequencyGrid({0.0}, band);
    }
    if (!(half_span > 0.0)) {
        throw DomainError("uniform grid half span must be positive");
    }
    const std::size_t half = points / 2;
    std::vector<double> positive(half);
    for (std::size_t k = 0; k < half; ++k) {
        positive[k] = half_span * static_cast<double>(k + 1) / static_cast<double>(half);
    }
    std::vector<double> omega(points);
    omega[half] = 0.0;
    for (std::size_t k = 0; k < half; ++k) {
        omega[half + 1 + k] = positive[k];
        omega[half - 1 - k] = -positive[k];
    }
    return FrequencyGrid(std::move(omega), band);
}

FrequencyGrid FrequencyGrid::mirrored(std::span<const double> non_negative, Band band) {
    if (non_negative.empty()) {
        throw DomainError("frequency grid is empty");
    }
    if (non_negative.front() < 0.0) {
        throw DomainError("mirrored grid expects non-negative frequencies");
    }
    const bool has_zero = non_negative.front() == 0.0;
    const std::size_t start = has_zero ? 1 : 0;
    std::vector<double> omega;
    omega.reserve(2 * non_negative.size());
    for (std::size_t k = non_negative.size(); k-- > start;) {
        omega.push_back(-non_negative[k]);
    }
    if (has_zero) {
        omega.push_back(0.0);
    }
    for (std::size_t k = start; k < non_negative.size(); ++k) {
        omega.push_back(non_negative[k]);
    }
    return FrequencyGrid(std::move(omega), band);
}

std::optional<std::size_t> FrequencyGrid::find(double omega, double tolerance) const {
    auto it = std::lower_bound(omega_.begin(), omega_.end(), omega);
    std::optional<std::size_t> best;
    double best_distance = tolerance;
    auto consider = [&](std::vector<double>::const_iterator candidate) {
        if (candidate == omega_.end()) {
            return;
        }
        const double distance = std::abs(*candidate - omega);
        if (distance <= best_distance) {
            best_distance = distance;
            best = static_cast<std::size_t>(candidate - omega_.begin());
        }
    };
    consider(it);
    if (it != omega_.begin()) {
        consider(std::prev(it));
    }
    return best;
}

std::vector<std::size_t> FrequencyGrid::non_negative_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < omega_.size(); ++j) {
        if (omega_[j] >= 0.0) {
            out.push_back(j);
        }
    }
    return out;
}

} // namespace optonoise
