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

/// Single-pulse CNOT through the trapped state |0,a>.
///
/// With Omega_1^(1) - Omega_1^(2) = sqrt(2) Omega, Omega_0^(2) = sqrt(2) Omega and
/// Omega_0^(1) = 0, the Zeno-projected Hamiltonian is a three-level chain
/// |0,1,0> - |0,a> - |0,1,1> with couplings of magnitude |Omega|/2, and a pulse
/// of length T = sqrt(2) pi / |Omega| swaps the two ends. Atom 1 is the
/// control qubit.

#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "zenogate/dynamics.hpp"
#include "zenogate/hilbert.hpp"
#include "zenogate/model.hpp"
#include "zenogate/propagate.hpp"

namespace zenogate {

struct CnotConfig {
    Complex omega{0.01, 0.0};
    SystemParams params{};
    SpaceConfig space{};
    PropagationConfig propagation{};
    /// Omega_1^(1) = split * sqrt(2) Omega, Omega_1^(2) = (split - 1) * sqrt(2) Omega.
    /// 0.5 gives the symmetric +-Omega/sqrt(2) choice.
    double split = 0.5;
    double separation_threshold = 0.1;

    void validate() const {
        if (!(std::abs(omega) > 0)) throw InputError("CNOT Rabi scale Omega must be non-zero");
        params.validate();
        space.validate();
        propagation.validate();
    }
};

[[nodiscard]] inline double gate_duration(Complex omega) {
    if (!(std::abs(omega) > 0)) throw InputError("CNOT Rabi scale Omega must be non-zero");
    return std::numbers::sqrt2 * std::numbers::pi / std::abs(omega);
}

[[nodiscard]] inline LaserPulse cnot_rabi_assignment(Complex omega, double split = 0.5) {
    const double duration = gate_duration(omega);
    const Complex diff = std::numbers::sqrt2 * omega;
    LaserPulse pulse;
    pulse.set_rabi(1, 1, split * diff);
    pulse.set_rabi(1, 2, (split - 1.0) * diff);
    pulse.set_rabi(0, 2, std::numbers::sqrt2 * omega);
    pulse.set_rabi(0, 1, 0.0);
    pulse.duration = duration;
    return pulse;
}

/// 1/2 [Omega (|010><0a| - |0a><011|) + h.c.] as a 5 x 5 matrix in the
/// dfs_basis() ordering. This is the textbook form of the projected CNOT
/// generator; for complex Omega the projection of the assigned lasers gives
/// <011|H|0a> = -Omega/2 rather than -Omega*/2 (the two agree for real Omega).
[[nodiscard]] inline Eigen::MatrixXcd cnot_effective_hamiltonian_reference(Complex omega) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(kDfsSize, kDfsSize);
    h(kDfs010, kDfsTrapped) += 0.5 * omega;
    h(kDfsTrapped, kDfs011) += -0.5 * omega;
    const Eigen::MatrixXcd half = h;
    h += half.adjoint();
    return h;
}

/// Ideal gate on the DFS. The qubit block is fixed: swap |0,1,0> <-> |0,1,1>,
/// identity on |0,0,0>, |0,0,1>. The trapped-state column is the reference
/// effective evolution (real Omega) at the gate time.
struct IdealCnot {
    Eigen::MatrixXcd reduced;
    Operator embedded;
};

[[nodiscard]] inline IdealCnot ideal_cnot_unitary(const SpaceConfig &space) {
    IdealCnot out;
    out.reduced = Eigen::MatrixXcd::Zero(kDfsSize, kDfsSize);
    out.reduced(kDfs000, kDfs000) = 1.0;
    out.reduced(kDfs001, kDfs001) = 1.0;
    out.reduced(kDfs010, kDfs011) = 1.0;
    out.reduced(kDfs011, kDfs010) = 1.0;
    const Complex unit{1.0, 0.0};
    const Eigen::MatrixXcd u_ref =
        propagator(cnot_effective_hamiltonian_reference(unit), gate_duration(unit));
    out.reduced(kDfsTrapped, kDfsTrapped) = u_ref(kDfsTrapped, kDfsTrapped);
    const auto dfs = dfs_basis(space);
    const Eigen::MatrixXcd basis = orthonormal_columns(dfs);
    out.embedded = basis * out.reduced * basis.adjoint();
    return out;
}

struct SeparationReport {
    double gamma_over_omega = 0.0;      // Gamma_cav / |Omega|
    double omega_over_kappa = 0.0;      // |Omega| / kappa
    double omega_kappa_over_g2 = 0.0;   // |Omega| kappa / g^2
    double threshold = 0.1;
    std::vector<std::string> flags;

    [[nodiscard]] bool ok() const { return flags.empty(); }
};

/// Checks Gamma_cav << |Omega| << kappa, g^2/kappa, one ratio at a time.
[[nodiscard]] inline SeparationReport validate_separation(const CnotConfig &cfg) {
    SeparationReport r;
    r.threshold = cfg.separation_threshold;
    const double w = std::abs(cfg.omega);
    const auto &p = cfg.params;
    r.gamma_over_omega = p.gamma_cav / w;
    r.omega_over_kappa = p.kappa > 0 ? w / p.kappa : std::numeric_limits<double>::infinity();
    r.omega_kappa_over_g2 = w * p.kappa / (p.g * p.g);
    const auto flag = [&](double ratio, const char *name) {
        if (ratio > r.threshold) {
            r.flags.push_back(std::string(name) + " = " + std::to_string(ratio) +
                              " exceeds " + std::to_string(r.threshold));
        }
    };
    flag(r.gamma_over_omega, "gamma_cav/|omega|");
    flag(r.omega_over_kappa, "|omega|/kappa");
    flag(r.omega_kappa_over_g2, "|omega|*kappa/g^2");
    return r;
}

struct GateOutcome {
    StateVector final_state;  // normalized conditional state at T
    double p0 = 0.0;
    double fidelity = 0.0;
    double duration = 0.0;
    SeparationReport separation;
    std::vector<std::string> warnings;

    /// <dfs member k | final state>.
    [[nodiscard]] Complex amplitude(const SpaceConfig &space, int member) const {
        return dfs_basis(space)[static_cast<std::size_t>(member)].dot(final_state);
    }
};

/// Total generator H_cond + H_laser for the CNOT assignment.
[[nodiscard]] inline Operator cnot_hamiltonian(const CnotConfig &cfg) {
    return conditional_hamiltonian(cfg.params, cfg.space) +
           laser_hamiltonian(cnot_rabi_assignment(cfg.omega, cfg.split), cfg.space);
}

namespace detail {

inline void check_dfs_input(const StateVector &psi0, const SpaceConfig &space) {
    check_dim(psi0.size(), space, "initial state");
    if (std::abs(psi0.squaredNorm() - 1.0) > 1e-10) {
        throw InputError("gate input state is not normalized");
    }
    const StateVector inside = dfs_projector(space) * psi0;
    if ((inside - psi0).norm() > 1e-10) {
        throw InputError("gate input state has support outside the decoherence-free subspace");
    }
}

}  // namespace detail

/// Runs the pulse on psi0 under the full conditional dynamics.
[[nodiscard]] inline GateOutcome apply_cnot(const StateVector &psi0, const CnotConfig &cfg) {
    cfg.validate();
    detail::check_dfs_input(psi0, cfg.space);
    GateOutcome out;
    out.duration = gate_duration(cfg.omega);
    out.separation = validate_separation(cfg);
    out.warnings = out.separation.flags;
    const StateVector psi_t = propagate(cnot_hamiltonian(cfg), psi0, out.duration, cfg.propagation);
    out.p0 = no_emission_probability(psi_t);
    out.final_state = conditional_state(psi_t);
    const StateVector target = ideal_cnot_unitary(cfg.space).embedded * psi0;
    out.fidelity = std::min(1.0, std::norm(target.dot(out.final_state)));
    return out;
}

/// Norm distance between the renormalized full evolution and the evolution
/// under the projected (effective) Hamiltonian, at fractions of the gate time.
struct ComparisonReport {
    std::vector<double> times;
    std::vector<double> distances;
    [[nodiscard]] double final_distance() const { return distances.empty() ? 0.0 : distances.back(); }
};

[[nodiscard]] inline ComparisonReport effective_vs_full_comparison(
    const StateVector &psi0, const CnotConfig &cfg,
    std::span<const double> fractions = std::span<const double>{}) {
    cfg.validate();
    detail::check_dfs_input(psi0, cfg.space);
    static constexpr std::array<double, 4> kDefaultFractions{0.25, 0.5, 0.75, 1.0};
    if (fractions.empty()) fractions = kDefaultFractions;
    const Operator h = cnot_hamiltonian(cfg);
    const auto dfs = dfs_basis(cfg.space);
    const Operator h_eff = effective_hamiltonian(h, dfs).embedded;
    const double T = gate_duration(cfg.omega);
    ComparisonReport rep;
    for (double f : fractions) {
        const double t = f * T;
        const StateVector full = conditional_state(propagate(h, psi0, t, cfg.propagation));
        const StateVector eff = propagate(h_eff, psi0, t, cfg.propagation);
        rep.times.push_back(t);
        rep.distances.push_back((full - eff).norm());
    }
    return rep;
}

/// |0, j1, j2> for j1, j2 in {0, 1}.
[[nodiscard]] inline StateVector qubit_state(int control, int target, const SpaceConfig &space) {
    if ((control != 0 && control != 1) || (target != 0 && target != 1)) {
        throw InputError("qubit values must be 0 or 1");
    }
    return basis_state({0, control, target}, space);
}

}  // namespace zenogate
