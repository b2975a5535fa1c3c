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
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include <boost/multiprecision/complex128.hpp>

#include "optonoise/frequency_grid.hpp"
#include "optonoise/noise_channel.hpp"

namespace optonoise {

using Complex = std::complex<double>;

/// Storage type of form coefficients. Combined observables subtract
/// back-action terms far larger than the vacuum part they leave behind, so
/// coefficients carry quad precision and are rounded only on the way out.
using Wide = boost::multiprecision::complex128;

Wide widen(Complex z);
Complex narrow(const Wide &z);

/// A complex function sampled on a FrequencyGrid.
using GridFunction = std::vector<Complex>;

GridFunction constant_function(const FrequencyGrid &grid, Complex value);
GridFunction sample_function(const FrequencyGrid &grid, const std::function<Complex(double)> &fn);

/// Raw coefficient storage. Channel coefficients are laid out channel-major:
/// index `channel * grid.size() + j`.
struct FormCoefficients {
    std::vector<Complex> u;        ///< coefficient of a_i(W)
    std::vector<Complex> v;        ///< coefficient of a_i^+(-W)
    std::vector<Complex> signal_u; ///< coefficient of the signal force envelope f(W)
    std::vector<Complex> signal_v; ///< coefficient of f^+(-W)

    static FormCoefficients zeros(std::size_t channels, std::size_t points);
};

/// FormCoefficients at storage precision.
struct WideCoefficients {
    std::vector<Wide> u;
    std::vector<Wide> v;
    std::vector<Wide> signal_u;
    std::vector<Wide> signal_v;

    static WideCoefficients zeros(std::size_t channels, std::size_t points);
};

/// An observable written as a linear combination of input noise operators
/// and the classical signal force, one set of coefficients per frequency.
///
/// The signal is carried as an operator pair exactly like a noise channel.
/// In the rotating frame f(W) and f^+(-W) are the force components at
/// w_M + W and w_M - W; for a real force in the absolute band they coincide.
///
/// A form is a quadrature when it is the transform of a self-adjoint
/// operator, i.e. u_i(W) = conj(v_i(-W)) and likewise for the signal pair.
/// Construction detects this to 1e-12 relative and then makes the pairing
/// exact, so a quadrature never drifts.
class LinearForm {
  public:
    using GridPtr = std::shared_ptr<const FrequencyGrid>;
    using BasisPtr = std::shared_ptr<const ChannelBasis>;

    LinearForm(GridPtr grid, BasisPtr basis, FormCoefficients coefficients);
    LinearForm(GridPtr grid, BasisPtr basis, WideCoefficients coefficients);

    static LinearForm zero(GridPtr grid, BasisPtr basis);
    /// a_i(W) for one channel.
    static LinearForm annihilation(GridPtr grid, BasisPtr basis, std::size_t channel);
    /// The signal force envelope f(W) alone.
    static LinearForm signal(GridPtr grid, BasisPtr basis);

    const FrequencyGrid &grid() const noexcept { return *grid_; }
    const GridPtr &grid_ptr() const noexcept { return grid_; }
    const ChannelBasis &channels() const noexcept { return *basis_; }
    const BasisPtr &basis_ptr() const noexcept { return basis_; }

    std::size_t points() const noexcept { return grid_->size(); }
    std::size_t channel_count() const noexcept { return basis_->size(); }

    bool is_quadrature() const noexcept { return quadrature_; }

    Complex u(std::size_t channel, std::size_t j) const { return narrow(c_.u[channel * points() + j]); }
    Complex v(std::size_t channel, std::size_t j) const { return narrow(c_.v[channel * points() + j]); }
    Complex signal_u(std::size_t j) const { return narrow(c_.signal_u[j]); }
    Complex signal_v(std::size_t j) const { return narrow(c_.signal_v[j]); }

    const Wide &wide_u(std::size_t channel, std::size_t j) const { return c_.u[channel * points() + j]; }
    const Wide &wide_v(std::size_t channel, std::size_t j) const { return c_.v[channel * points() + j]; }
    const Wide &wide_signal_u(std::size_t j) const { return c_.signal_u[j]; }
    const Wide &wide_signal_v(std::size_t j) const { return c_.signal_v[j]; }

    /// Coefficients rounded to double.
    FormCoefficients coefficients() const;
    const WideCoefficients &wide_coefficients() const noexcept { return c_; }

    /// True when both forms live on equal grids and channel bases.
    bool same_structure(const LinearForm &other) const;

  private:
    void validate_and_pair();

    GridPtr grid_;
    BasisPtr basis_;
    WideCoefficients c_;
    bool quadrature_ = false;
};

/// c(W) with [f1(W), f2^+(W')] = 2 pi c(W) delta(W - W').
GridFunction commutator(const LinearForm &f1, const LinearForm &f2);

/// Coefficient-wise sum of weight_k(W) * form_k(W). Exact.
LinearForm combine(const std::vector<std::reference_wrapper<const LinearForm>> &forms,
                   const std::vector<GridFunction> &weights);

/// O^+(-W): the adjoint evaluated at the mirrored frequency.
LinearForm adjoint_mirror(const LinearForm &form);

/// Amplitude quadrature (O(W) + O^+(-W)) / sqrt 2.
LinearForm amplitude_quadrature(const LinearForm &field);
/// Phase quadrature (O(W) - O^+(-W)) / (i sqrt 2).
LinearForm phase_quadrature(const LinearForm &field);

/// Single-sided symmetrized noise density of a quadrature (signal excluded).
std::vector<double> psd(const LinearForm &form);

/// Noise density carried by the channels of one role only.
std::vector<double> psd_of_role(const LinearForm &form, ChannelRole role);

/// Transfer to the printed amplitude quadrature of the force,
/// f_a = (f(W) + f^+(-W)) / sqrt 2, i.e. (s_u + s_v) / sqrt 2.
GridFunction signal_transfer(const LinearForm &form);

} // namespace optonoise
