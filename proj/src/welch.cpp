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

#include "optonoise/welch.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include "optonoise/errors.hpp"

namespace optonoise {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex &planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

struct WelchEstimator::Plan {
    explicit Plan(std::size_t n)
        : in(static_cast<double *>(fftw_malloc(sizeof(double) * n))),
          out(static_cast<fftw_complex *>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    }
    ~Plan() {
        {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(plan);
        }
        fftw_free(in);
        fftw_free(out);
    }
    Plan(const Plan &) = delete;
    Plan &operator=(const Plan &) = delete;

    double *in;
    fftw_complex *out;
    fftw_plan plan;
};

WindowKind parse_window(const std::string &name) {
    if (name == "hann") {
        return WindowKind::Hann;
    }
    if (name == "rectangular") {
        return WindowKind::Rectangular;
    }
    throw ValidationError("welch.window", "unknown window '" + name + "' (hann | rectangular)");
}

std::string window_name(WindowKind kind) { return kind == WindowKind::Hann ? "hann" : "rectangular"; }

WelchEstimator::WelchEstimator(std::size_t segment_length, double overlap, WindowKind window, double dt)
    : segment_length_(segment_length), dt_(dt) {
    if (segment_length < 8 || segment_length % 2 != 0) {
        throw DomainError("welch segment length must be even and >= 8");
    }
    if (!(overlap >= 0.0 && overlap < 1.0)) {
        throw DomainError("welch overlap must lie in [0, 1)");
    }
    if (!(dt > 0.0)) {
        throw DomainError("sample interval must be positive");
    }
    step_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround((1.0 - overlap) * segment_length)));
    window_.resize(segment_length);
    for (std::size_t n = 0; n < segment_length; ++n) {
        // Periodic Hann: exact overlap-add at 50 %.
        window_[n] = window == WindowKind::Hann
                         ? 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                                static_cast<double>(segment_length))
                         : 1.0;
        window_power_ += window_[n] * window_[n];
    }
    // Correlation of periodograms of segments j steps apart (white input).
    double correlation_sum = 0.0;
    for (std::size_t shift = step_; shift < segment_length; shift += step_) {
        double c = 0.0;
        for (std::size_t n = 0; n + shift < segment_length; ++n) {
            c += window_[n] * window_[n + shift];
        }
        const double rho = c / window_power_;
        correlation_sum += rho * rho;
    }
    overlap_variance_factor_ = 1.0 + 2.0 * correlation_sum;
    sum_.assign(bins(), 0.0);
    plan_ = std::make_unique<Plan>(segment_length);
}

WelchEstimator::~WelchEstimator() = default;
WelchEstimator::WelchEstimator(WelchEstimator &&) noexcept = default;
WelchEstimator &WelchEstimator::operator=(WelchEstimator &&) noexcept = default;

std::size_t WelchEstimator::segments_in(std::size_t samples) const {
    return samples < segment_length_ ? 0 : (samples - segment_length_) / step_ + 1;
}

void WelchEstimator::accumulate(std::span<const double> record) {
    const std::size_t count = segments_in(record.size());
    for (std::size_t s = 0; s < count; ++s) {
        const double *x = record.data() + s * step_;
        for (std::size_t n = 0; n < segment_length_; ++n) {
            plan_->in[n] = window_[n] * x[n];
        }
        fftw_execute_dft_r2c(plan_->plan, plan_->in, plan_->out);
        for (std::size_t k = 0; k < bins(); ++k) {
            sum_[k] += plan_->out[k][0] * plan_->out[k][0] + plan_->out[k][1] * plan_->out[k][1];
        }
    }
    segments_ += count;
}

void WelchEstimator::merge(const WelchEstimator &other) {
    if (other.segment_length_ != segment_length_ || other.step_ != step_ || other.dt_ != dt_ ||
        other.window_ != window_) {
        throw StructuralError("cannot merge Welch estimators with different settings");
    }
    for (std::size_t k = 0; k < bins(); ++k) {
        sum_[k] += other.sum_[k];
    }
    segments_ += other.segments_;
}

PsdEstimate WelchEstimator::estimate(std::size_t min_segments) const {
    if (segments_ < min_segments || segments_ == 0) {
        throw ContractError("record admits " + std::to_string(segments_) + " Welch segments, need " +
                            std::to_string(min_segments));
    }
    PsdEstimate e;
    e.segments = segments_;
    e.effective_segments = static_cast<double>(segments_) / overlap_variance_factor_;
    const double scale = dt_ / (window_power_ * static_cast<double>(segments_));
    const double bin_width = 2.0 * std::numbers::pi / (static_cast<double>(segment_length_) * dt_);
    e.omega.resize(bins());
    e.psd.resize(bins());
    e.std_error.resize(bins());
    for (std::size_t k = 0; k < bins(); ++k) {
        const bool edge = k == 0 || k == bins() - 1;
        e.omega[k] = bin_width * static_cast<double>(k);
        e.psd[k] = (edge ? 1.0 : 2.0) * scale * sum_[k];
        // Edge bins are real-valued: chi-square with half the dof.
        e.std_error[k] = e.psd[k] * std::sqrt((edge ? 2.0 : 1.0) / e.effective_segments);
    }
    return e;
}

PsdEstimate welch_psd(std::span<const double> record, double dt, std::size_t segment_length, double overlap,
                      WindowKind window, std::size_t min_segments) {
    WelchEstimator w(segment_length, overlap, window, dt);
    w.accumulate(record);
    return w.estimate(min_segments);
}

} // namespace optonoise
