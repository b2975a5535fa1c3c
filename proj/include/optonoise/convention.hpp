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

// Spectral-density normalization shared by every module.
//
// Operators obey [a(W), a^+(W')] = 2 pi delta(W - W'). For a self-adjoint
// observable O the symmetrized two-sided density S_sym is defined by
//   (1/2) <O(W) O^+(W') + O^+(W') O(W)> = 2 pi S_sym(W) delta(W - W').
// Every density reported by the engine is single-sided, per Hz of
// (W / 2 pi), and equals kSingleSidedFactor * S_sym. With these constants a
// vacuum quadrature has density exactly 1, and a real white process with
// <x(t) x(t')> = N delta(t - t') has density 2 N, which is also what the
// Welch estimator returns.

namespace optonoise::convention {

/// Symmetrized weight of a vacuum channel: (<a a^+> + <a^+ a>) / 2.
inline constexpr double kVacuumWeight = 0.5;

/// Two-sided symmetrized to single-sided.
inline constexpr double kSingleSidedFactor = 2.0;

/// Symmetrized weight of a thermal channel with mean occupation n.
constexpr double thermal_weight(double occupation) { return occupation + kVacuumWeight; }

/// Per-sample variance of a discretized white process whose single-sided
/// density is `density`, sampled with step `dt`.
constexpr double white_sample_variance(double density, double dt) {
    return density / (kSingleSidedFactor * dt);
}

} // namespace optonoise::convention
