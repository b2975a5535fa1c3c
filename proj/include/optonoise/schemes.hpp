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

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "optonoise/frequency_grid.hpp"
#include "optonoise/linear_form.hpp"
#include "optonoise/mechanics.hpp"
#include "optonoise/noise_channel.hpp"

namespace optonoise {

/// Normalized probe: the mode and the coupling strength K.
struct Probe {
    ProbeMode mode = ProbeMode::Monochromatic;
    double kappa = 0.0;

    void validate() const;
};

Probe normalized_probe(const PhysicalOscillator &osc, const PhysicalProbe &probe);

/// Homodyne angle with its sine and cosine held exactly. Angles returned by
/// optimal_homodyne_angle satisfy the cancellation condition without the
/// round trip through atan/cos/sin.
class HomodyneAngle {
  public:
    static HomodyneAngle radians(double psi);
    /// The angle in (0, pi) whose cotangent is `cot`.
    static HomodyneAngle from_cotangent(double cot);

    double value() const noexcept { return value_; }
    double cos() const noexcept { return cos_; }
    double sin() const noexcept { return sin_; }

  private:
    HomodyneAngle(double value, double c, double s) : value_(value), cos_(c), sin_(s) {}
    double value_;
    double cos_;
    double sin_;
};

/// psi as a function of |w|. Evaluated at |w| so the readout stays a
/// quadrature on a symmetric grid.
using AngleFunction = std::function<HomodyneAngle(double omega)>;
using AngleSpec = std::variant<HomodyneAngle, AngleFunction>;

/// Re[K / Z(w)], the quantity the variational condition cancels.
double backaction_ratio(const Oscillator &osc, double kappa, double omega);

/// psi solving cos psi + Re[K/Z(w_f0)] sin psi = 0 in (0, pi).
/// Throws NoCancellation when Re[K/Z] = 0.
HomodyneAngle optimal_homodyne_angle(const Oscillator &osc, double kappa, double omega_f0);

/// Pointwise extension of the angle condition. Falls back to pi/2 where
/// Re[K/Z] vanishes (no back action to cancel there).
AngleFunction pointwise_optimal_angle(const Oscillator &osc, double kappa);

/// Classical steady state of the two-tone probe.
struct DcDrive {
    std::complex<double> amplitude_plus{1.0, 0.0};
    std::complex<double> amplitude_minus{1.0, 0.0};
    double coupling = 0.0; ///< k x0
    /// Applied compensation force; nullopt selects exact compensation.
    std::optional<std::complex<double>> f_comp;
};

/// Equal unit amplitudes with the coupling implied by `kappa`.
DcDrive equal_drive(const Oscillator &osc, double kappa);
DcDrive physical_drive(const PhysicalOscillator &osc, const PhysicalProbe &probe);

struct DcState {
    std::complex<double> f_comp;        ///< force actually applied
    std::complex<double> f_comp_exact;  ///< -2 i k x0 A+ A-^*
    std::complex<double> d;             ///< steady mechanical amplitude D
    std::complex<double> output_plus;   ///< B+
    std::complex<double> output_minus;  ///< B-
};

/// Throws SingularityError for gamma_M = 0 without exact compensation.
DcState dichromatic_dc_state(const Oscillator &osc, const DcDrive &drive);

enum class SchemeKind { Monochromatic, DichromaticToy, FourProbe };

struct SchemeInstance {
    SchemeKind kind = SchemeKind::Monochromatic;
    Oscillator osc;
    Probe probe;
    LinearForm::GridPtr grid;
    LinearForm::BasisPtr channels;
    /// Measured quadratures and their combinations.
    std::map<std::string, LinearForm> observables;
    /// Output fields before quadrature extraction (canonicality checks).
    std::map<std::string, LinearForm> fields;
    /// Unit-normalized quadrature that carries the back action.
    std::optional<LinearForm> drive;
    /// Observable whose force-referred spectrum is the headline result.
    std::string signal_observable;
    std::optional<DcState> dc;

    const LinearForm &observable(const std::string &name) const;
    std::vector<std::string> observable_names() const;
};

SchemeInstance build_monochromatic(const Oscillator &osc, const Probe &probe, const FrequencyGrid &grid,
                                   const AngleSpec &psi);

SchemeInstance build_toy_dichromatic(const Oscillator &osc, const Probe &probe, const FrequencyGrid &grid,
                                     std::optional<DcDrive> drive = std::nullopt);

SchemeInstance build_four_probe(const Oscillator &osc, const Probe &probe, const FrequencyGrid &grid);

/// Dispatch on probe.mode. The angle is used by the monochromatic scheme only.
SchemeInstance build_scheme(const Oscillator &osc, const Probe &probe, const FrequencyGrid &grid,
                            const AngleSpec &psi);

/// The separately measured back-action quadrature. Unsupported for the
/// monochromatic scheme.
const LinearForm &backaction_record(const SchemeInstance &scheme);

/// Observable names in the four-probe scheme, l, n in {1, 2}.
std::string four_probe_name(bool plus, int l, int n);

} // namespace optonoise
