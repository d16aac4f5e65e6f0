// Copyright 2026 The zenogate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// Conditional (no-emission) time evolution psi(t) = exp(-i H t) psi(0) for a
/// possibly non-Hermitian H, with hbar = 1.
///
/// Two interchangeable backends:
///  - exact:    dense matrix exponential (Pade, scaling and squaring)
///  - adaptive: embedded Dormand-Prince 5(4) stepper with error control
///
/// The two are cross-checked against each other in the test suite.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "zenogate/hilbert.hpp"

namespace zenogate {

enum class PropagationMethod { exact_exponential, adaptive_stepper };

struct PropagationConfig {
    PropagationMethod method = PropagationMethod::exact_exponential;
    double dt_initial = 1e-2;
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    long max_steps = 50'000'000;

    void validate() const {
        if (!(dt_initial > 0) || !(rel_tol > 0) || !(abs_tol > 0)) {
            throw InputError("propagation step and tolerances must be positive");
        }
    }
};

inline std::string to_string(PropagationMethod m) {
    return m == PropagationMethod::exact_exponential ? "exact" : "adaptive";
}

inline PropagationMethod parse_propagation_method(const std::string &s) {
    if (s == "exact" || s == "exact-exponential") return PropagationMethod::exact_exponential;
    if (s == "adaptive" || s == "adaptive-stepper") return PropagationMethod::adaptive_stepper;
    throw InputError("unknown propagation method '" + s + "' (expected exact|adaptive)");
}

/// exp(-i H t).
[[nodiscard]] inline Operator propagator(const Operator &h, double t) {
    const Operator generator = Complex(0.0, -t) * h;
    return generator.exp();
}

namespace detail {

// Dormand-Prince 5(4) tableau.
struct DormandPrince {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - b*, the embedded 4th-order difference
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

inline StateVector propagate_adaptive(const Operator &h, const StateVector &psi0, double t,
                                      const PropagationConfig &cfg) {
    using DP = DormandPrince;
    const Operator gen = Complex(0.0, -1.0) * h;
    StateVector y = psi0;
    StateVector k1 = gen * y;
    double time = 0.0;
    double dt = std::min(cfg.dt_initial, t);
    long steps = 0;
    double last_err = 0.0;
    while (time < t) {
        if (++steps > cfg.max_steps) {
            throw IntegratorError("adaptive stepper exceeded " + std::to_string(cfg.max_steps) +
                                      " steps at t = " + std::to_string(time),
                                  last_err);
        }
        dt = std::min(dt, t - time);
        const StateVector k2 = gen * (y + dt * DP::a21 * k1);
        const StateVector k3 = gen * (y + dt * (DP::a31 * k1 + DP::a32 * k2));
        const StateVector k4 = gen * (y + dt * (DP::a41 * k1 + DP::a42 * k2 + DP::a43 * k3));
        const StateVector k5 =
            gen * (y + dt * (DP::a51 * k1 + DP::a52 * k2 + DP::a53 * k3 + DP::a54 * k4));
        const StateVector k6 = gen * (y + dt * (DP::a61 * k1 + DP::a62 * k2 + DP::a63 * k3 +
                                                DP::a64 * k4 + DP::a65 * k5));
        const StateVector y_new =
            y + dt * (DP::b1 * k1 + DP::b3 * k3 + DP::b4 * k4 + DP::b5 * k5 + DP::b6 * k6);
        const StateVector k7 = gen * y_new;
        const StateVector err_vec = dt * (DP::e1 * k1 + DP::e3 * k3 + DP::e4 * k4 +
                                          DP::e5 * k5 + DP::e6 * k6 + DP::e7 * k7);
        double err = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double scale =
                cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y(i)), std::abs(y_new(i)));
            err = std::max(err, std::abs(err_vec(i)) / scale);
        }
        last_err = err;
        if (err <= 1.0) {
            time += dt;
            y = y_new;
            k1 = k7;
        }
        const double factor =
            err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        dt *= factor;
        if (dt < 1e-15 * std::max(1.0, t)) {
            throw IntegratorError("adaptive stepper step size underflow at t = " +
                                      std::to_string(time),
                                  err);
        }
    }
    return y;
}

}  // namespace detail

/// Unnormalized conditional state exp(-i H t) psi0. Norm is non-increasing
/// when i(H - H^dagger) is positive semi-definite.
[[nodiscard]] inline StateVector propagate(const Operator &h, const StateVector &psi0, double t,
                                           const PropagationConfig &cfg = {}) {
    cfg.validate();
    if (h.rows() != h.cols() || h.cols() != psi0.size()) {
        throw InputError("propagate: operator/state dimension mismatch");
    }
    if (!(t >= 0.0)) {
        throw InputError("propagate: time must be >= 0, got " + std::to_string(t));
    }
    if (t == 0.0) {
        return psi0;
    }
    switch (cfg.method) {
        case PropagationMethod::exact_exponential:
            return propagator(h, t) * psi0;
        case PropagationMethod::adaptive_stepper:
            return detail::propagate_adaptive(h, psi0, t, cfg);
    }
    return psi0;
}

}  // namespace zenogate
