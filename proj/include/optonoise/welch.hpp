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
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace optonoise {

enum class WindowKind { Hann, Rectangular };

WindowKind parse_window(const std::string &name);
std::string window_name(WindowKind kind);

struct PsdEstimate {
    std::vector<double> omega;  ///< bin centres, rad/s
    std::vector<double> psd;    ///< single-sided density per Hz
    std::vector<double> std_error; ///< one-sigma error per bin
    std::size_t segments = 0;
    double effective_segments = 0.0;
};

/// Averaged-periodogram estimator. Segments are accumulated from any
/// number of records; the result is the mean over all of them.
class WelchEstimator {
  public:
    WelchEstimator(std::size_t segment_length, double overlap, WindowKind window, double dt);
    ~WelchEstimator();
    WelchEstimator(WelchEstimator &&) noexcept;
    WelchEstimator &operator=(WelchEstimator &&) noexcept;

    /// Segments a record would contribute.
    std::size_t segments_in(std::size_t samples) const;

    void accumulate(std::span<const double> record);
    /// Adds another estimator's sums. Both must share settings.
    void merge(const WelchEstimator &other);

    std::size_t segments() const noexcept { return segments_; }
    std::size_t bins() const noexcept { return segment_length_ / 2 + 1; }

    /// Throws ContractError when fewer than `min_segments` were seen.
    PsdEstimate estimate(std::size_t min_segments = 20) const;

  private:
    struct Plan;
    std::size_t segment_length_;
    std::size_t step_;
    double dt_;
    std::vector<double> window_;
    double window_power_ = 0.0;
    double overlap_variance_factor_ = 1.0;
    std::vector<double> sum_;
    std::size_t segments_ = 0;
    std::unique_ptr<Plan> plan_;
};

/// One-shot convenience over a single record.
PsdEstimate welch_psd(std::span<const double> record, double dt, std::size_t segment_length, double overlap,
                      WindowKind window, std::size_t min_segments = 20);

} // namespace optonoise
