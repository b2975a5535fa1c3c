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

#include "optonoise/linear_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "optonoise/convention.hpp"
#include "optonoise/errors.hpp"

namespace optonoise {

namespace {

constexpr double kPairingTolerance = 1e-12;

bool finite(const Wide &z) {
    const Complex c = narrow(z);
    return std::isfinite(c.real()) && std::isfinite(c.imag());
}

double magnitude(const Wide &z) { return std::abs(narrow(z)); }

bool close_conjugate(const Wide &a, const Wide &b, double scale) {
    return magnitude(a - conj(b)) <= kPairingTolerance * scale;
}

std::vector<Wide> widen_all(const std::vector<Complex> &xs) {
    std::vector<Wide> out;
    out.reserve(xs.size());
    for (const Complex &x : xs) {
        out.push_back(widen(x));
    }
    return out;
}

std::vector<Complex> narrow_all(const std::vector<Wide> &xs) {
    std::vector<Complex> out;
    out.reserve(xs.size());
    for (const Wide &x : xs) {
        out.push_back(narrow(x));
    }
    return out;
}

void require_same_structure(const LinearForm &a, const LinearForm &b, const char *op) {
    if (!a.same_structure(b)) {
        throw StructuralError(std::string(op) + ": forms use different grids or channel bases");
    }
}

} // namespace

Wide widen(Complex z) { return Wide(z.real(), z.imag()); }

Complex narrow(const Wide &z) { return {static_cast<double>(real(z)), static_cast<double>(imag(z))}; }

GridFunction constant_function(const FrequencyGrid &grid, Complex value) {
    return GridFunction(grid.size(), value);
}

GridFunction sample_function(const FrequencyGrid &grid, const std::function<Complex(double)> &fn) {
    GridFunction out(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        out[j] = fn(grid[j]);
    }
    return out;
}

FormCoefficients FormCoefficients::zeros(std::size_t channels, std::size_t points) {
    FormCoefficients c;
    c.u.assign(channels * points, Complex{});
    c.v.assign(channels * points, Complex{});
    c.signal_u.assign(points, Complex{});
    c.signal_v.assign(points, Complex{});
    return c;
}

WideCoefficients WideCoefficients::zeros(std::size_t channels, std::size_t points) {
    WideCoefficients c;
    c.u.assign(channels * points, Wide{});
    c.v.assign(channels * points, Wide{});
    c.signal_u.assign(points, Wide{});
    c.signal_v.assign(points, Wide{});
    return c;
}

LinearForm::LinearForm(GridPtr grid, BasisPtr basis, FormCoefficients coefficients)
    : LinearForm(std::move(grid), std::move(basis),
                 WideCoefficients{widen_all(coefficients.u), widen_all(coefficients.v),
                                  widen_all(coefficients.signal_u), widen_all(coefficients.signal_v)}) {}

LinearForm::LinearForm(GridPtr grid, BasisPtr basis, WideCoefficients coefficients)
    : grid_(std::move(grid)), basis_(std::move(basis)), c_(std::move(coefficients)) {
    if (!grid_ || !basis_) {
        throw StructuralError("linear form needs a grid and a channel basis");
    }
    validate_and_pair();
}

void LinearForm::validate_and_pair() {
    const std::size_t n = points();
    const std::size_t m = channel_count();
    if (c_.u.size() != n * m || c_.v.size() != n * m || c_.signal_u.size() != n ||
        c_.signal_v.size() != n) {
        throw StructuralError("coefficient storage does not match grid and basis");
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (const auto *thermal = std::get_if<Thermal>(&(*basis_)[i].stats)) {
            if (!thermal->profile.empty() && thermal->profile.size() != n) {
                throw StructuralError("thermal profile length does not match the grid");
            }
        }
    }
    auto all_finite = [](const std::vector<Wide> &xs) { return std::all_of(xs.begin(), xs.end(), finite); };
    if (!all_finite(c_.u) || !all_finite(c_.v) || !all_finite(c_.signal_u) || !all_finite(c_.signal_v)) {
        throw DomainError("linear form has a non-finite coefficient");
    }

    // Pairing check: u(W) ~ conj v(-W) for every channel and for the signal.
    bool paired = true;
    for (std::size_t j = 0; j < n && paired; ++j) {
        const std::size_t mj = grid_->mirror(j);
        double scale = std::numeric_limits<double>::min();
        for (std::size_t i = 0; i < m; ++i) {
            scale = std::max({scale, magnitude(c_.u[i * n + j]), magnitude(c_.v[i * n + mj])});
        }
        scale = std::max({scale, magnitude(c_.signal_u[j]), magnitude(c_.signal_v[mj])});
        for (std::size_t i = 0; i < m && paired; ++i) {
            paired = close_conjugate(c_.u[i * n + j], c_.v[i * n + mj], scale);
        }
        paired = paired && close_conjugate(c_.signal_u[j], c_.signal_v[mj], scale);
    }
    quadrature_ = paired;
    if (!paired) {
        return;
    }
    // Snap to exact pairing. At W = 0 this is the reality condition.
    auto snap = [&](std::vector<Wide> &us, std::vector<Wide> &vs, std::size_t offset) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t mj = grid_->mirror(j);
            const Wide mean = (us[offset + j] + conj(vs[offset + mj])) / 2;
            us[offset + j] = mean;
            vs[offset + mj] = conj(mean);
        }
    };
    for (std::size_t i = 0; i < m; ++i) {
        snap(c_.u, c_.v, i * n);
    }
    snap(c_.signal_u, c_.signal_v, 0);
}

LinearForm LinearForm::zero(GridPtr grid, BasisPtr basis) {
    const std::size_t n = grid->size();
    const std::size_t m = basis->size();
    return LinearForm(std::move(grid), std::move(basis), FormCoefficients::zeros(m, n));
}

LinearForm LinearForm::annihilation(GridPtr grid, BasisPtr basis, std::size_t channel) {
    const std::size_t n = grid->size();
    const std::size_t m = basis->size();
    if (channel >= m) {
        throw StructuralError("channel index out of range");
    }
    auto c = FormCoefficients::zeros(m, n);
    std::fill_n(c.u.begin() + static_cast<std::ptrdiff_t>(channel * n), n, Complex{1.0, 0.0});
    return LinearForm(std::move(grid), std::move(basis), std::move(c));
}

LinearForm LinearForm::signal(GridPtr grid, BasisPtr basis) {
    const std::size_t n = grid->size();
    const std::size_t m = basis->size();
    auto c = FormCoefficients::zeros(m, n);
    std::fill(c.signal_u.begin(), c.signal_u.end(), Complex{1.0, 0.0});
    return LinearForm(std::move(grid), std::move(basis), std::move(c));
}

FormCoefficients LinearForm::coefficients() const {
    return {narrow_all(c_.u), narrow_all(c_.v), narrow_all(c_.signal_u), narrow_all(c_.signal_v)};
}

bool LinearForm::same_structure(const LinearForm &other) const {
    const bool grids = grid_ == other.grid_ || *grid_ == *other.grid_;
    const bool bases = basis_ == other.basis_ || *basis_ == *other.basis_;
    return grids && bases;
}

GridFunction commutator(const LinearForm &f1, const LinearForm &f2) {
    require_same_structure(f1, f2, "commutator");
    std::vector<Wide> c(f1.points());
    for (std::size_t i = 0; i < f1.channel_count(); ++i) {
        for (std::size_t j = 0; j < f1.points(); ++j) {
            c[j] += f1.wide_u(i, j) * conj(f2.wide_u(i, j)) - f1.wide_v(i, j) * conj(f2.wide_v(i, j));
        }
    }
    return narrow_all(c);
}

LinearForm combine(const std::vector<std::reference_wrapper<const LinearForm>> &forms,
                   const std::vector<GridFunction> &weights) {
    if (forms.empty()) {
        throw ContractError("combine: empty form list");
    }
    if (forms.size() != weights.size()) {
        throw ContractError("combine: weight count does not match form count");
    }
    const LinearForm &first = forms.front().get();
    const std::size_t n = first.points();
    const std::size_t m = first.channel_count();
    auto out = WideCoefficients::zeros(m, n);
    for (std::size_t k = 0; k < forms.size(); ++k) {
        const LinearForm &form = forms[k].get();
        require_same_structure(first, form, "combine");
        const GridFunction &w = weights[k];
        if (w.size() != n) {
            throw ContractError("combine: weight length does not match the grid");
        }
        const auto &c = form.wide_coefficients();
        std::vector<Wide> wide_w(n);
        for (std::size_t j = 0; j < n; ++j) {
            wide_w[j] = widen(w[j]);
        }
        for (std::size_t idx = 0; idx < m * n; ++idx) {
            const Wide &wj = wide_w[idx % n];
            out.u[idx] += wj * c.u[idx];
            out.v[idx] += wj * c.v[idx];
        }
        for (std::size_t j = 0; j < n; ++j) {
            out.signal_u[j] += wide_w[j] * c.signal_u[j];
            out.signal_v[j] += wide_w[j] * c.signal_v[j];
        }
    }
    return LinearForm(first.grid_ptr(), first.basis_ptr(), std::move(out));
}

LinearForm adjoint_mirror(const LinearForm &form) {
    const std::size_t n = form.points();
    const std::size_t m = form.channel_count();
    const auto &grid = form.grid();
    auto out = WideCoefficients::zeros(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t mj = grid.mirror(j);
            out.u[i * n + j] = conj(form.wide_v(i, mj));
            out.v[i * n + j] = conj(form.wide_u(i, mj));
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t mj = grid.mirror(j);
        out.signal_u[j] = conj(form.wide_signal_v(mj));
        out.signal_v[j] = conj(form.wide_signal_u(mj));
    }
    return LinearForm(form.grid_ptr(), form.basis_ptr(), std::move(out));
}

LinearForm amplitude_quadrature(const LinearForm &field) {
    const auto mirrored = adjoint_mirror(field);
    const double r = 1.0 / std::numbers::sqrt2;
    return combine({field, mirrored}, {constant_function(field.grid(), r), constant_function(field.grid(), r)});
}

LinearForm phase_quadrature(const LinearForm &field) {
    const auto mirrored = adjoint_mirror(field);
    const Complex w{0.0, -1.0 / std::numbers::sqrt2}; // 1 / (i sqrt 2)
    return combine({field, mirrored}, {constant_function(field.grid(), w), constant_function(field.grid(), -w)});
}

namespace {

std::vector<double> weighted_density(const LinearForm &form, const std::function<bool(const NoiseChannel &)> &keep) {
    if (!form.is_quadrature()) {
        throw ContractError("psd: form is not a quadrature (no self-adjoint pairing)");
    }
    const std::size_t n = form.points();
    std::vector<double> s(n, 0.0);
    for (std::size_t i = 0; i < form.channel_count(); ++i) {
        const NoiseChannel &channel = form.channels()[i];
        if (!keep(channel)) {
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
            s[j] += (std::norm(form.u(i, j)) + std::norm(form.v(i, j))) * channel.weight(j);
        }
    }
    for (double &x : s) {
        x *= convention::kSingleSidedFactor;
    }
    return s;
}

} // namespace

std::vector<double> psd(const LinearForm &form) {
    return weighted_density(form, [](const NoiseChannel &) { return true; });
}

std::vector<double> psd_of_role(const LinearForm &form, ChannelRole role) {
    return weighted_density(form, [role](const NoiseChannel &c) { return c.role == role; });
}

GridFunction signal_transfer(const LinearForm &form) {
    GridFunction s(form.points());
    for (std::size_t j = 0; j < form.points(); ++j) {
        s[j] = narrow(form.wide_signal_u(j) + form.wide_signal_v(j)) / std::numbers::sqrt2;
    }
    return s;
}

} // namespace optonoise
