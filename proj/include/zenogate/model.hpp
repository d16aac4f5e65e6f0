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

/// Hamiltonians of two Lambda atoms in a leaky single-mode cavity, the
/// decoherence-free subspace (DFS) they share, and a three-level V-system
/// used as an independent dark-period model.
///
/// Units: hbar = 1 and g = 1 by convention; all rates are in units of g and
/// times in units of 1/g.
///
/// Decay-rate convention: kappa and gamma_cav enter the conditional
/// Hamiltonian as amplitude rates, -i kappa b^dag b and -i gamma_cav |2><2|.
/// Populations therefore decay at 2 kappa and 2 gamma_cav. Jump operators
/// carry the matching sqrt(2 * rate).

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "zenogate/hilbert.hpp"
#include "zenogate/propagate.hpp"

namespace zenogate {

struct SystemParams {
    double g = 1.0;
    double kappa = 1.0;
    double gamma_cav = 0.0;

    void validate() const {
        if (!(g > 0.0)) throw InputError("coupling g must be > 0");
        if (!(kappa >= 0.0)) throw InputError("cavity decay kappa must be >= 0");
        if (!(gamma_cav >= 0.0)) throw InputError("spontaneous emission gamma_cav must be >= 0");
    }
};

/// Complex Rabi frequencies Omega_j^(i) for the j-2 transition of atom i,
/// stored as omega[j][i - 1].
struct LaserPulse {
    std::array<std::array<Complex, 2>, 2> omega{};
    double duration = 0.0;

    [[nodiscard]] Complex rabi(int j, int atom) const {
        if (j != 0 && j != 1) throw InputError("laser lower level must be 0 or 1");
        detail::check_atom(atom);
        return omega[static_cast<std::size_t>(j)][static_cast<std::size_t>(atom - 1)];
    }
    void set_rabi(int j, int atom, Complex value) {
        if (j != 0 && j != 1) throw InputError("laser lower level must be 0 or 1");
        detail::check_atom(atom);
        omega[static_cast<std::size_t>(j)][static_cast<std::size_t>(atom - 1)] = value;
    }
};

struct VSystemParams {
    Complex omega_w{0.01, 0.0};
    Complex omega_s{1.0, 0.0};
    double gamma_s = 1.0;
};

/// Jump operator with its rate folded in, c = sqrt(2 * rate) * transition.
struct JumpChannel {
    std::string name;
    Operator op;
    bool rate_absorbed = true;
};

/// H_cond = i g sum_i (b |2><1|_i - h.c.) - i gamma_cav sum_i |2><2|_i - i kappa b^dag b.
[[nodiscard]] inline Operator conditional_hamiltonian(const SystemParams &params,
                                                      const SpaceConfig &space) {
    params.validate();
    const Operator b = annihilation_operator(space);
    Operator h = Operator::Zero(space.dim(), space.dim());
    for (int atom = 1; atom <= 2; ++atom) {
        const Operator absorb = b * atomic_transition(atom, 2, 1, space);
        h += Complex(0.0, params.g) * (absorb - absorb.adjoint());
        h += Complex(0.0, -params.gamma_cav) * atomic_transition(atom, 2, 2, space);
    }
    h += Complex(0.0, -params.kappa) * (b.adjoint() * b);
    return h;
}

/// H_laser = 1/2 sum_{i,j} (Omega_j^(i) |j><2|_i + h.c.); acts trivially on the cavity.
[[nodiscard]] inline Operator laser_hamiltonian(const LaserPulse &pulse, const SpaceConfig &space) {
    Operator h = Operator::Zero(space.dim(), space.dim());
    for (int atom = 1; atom <= 2; ++atom) {
        for (int j = 0; j <= 1; ++j) {
            const Operator term = pulse.rabi(j, atom) * atomic_transition(atom, j, 2, space);
            h += 0.5 * (term + term.adjoint());
        }
    }
    return h;
}

/// J_- = sum_i |1><2|_i. Zero-photon states annihilated by it are dark.
[[nodiscard]] inline Operator collective_lowering(const SpaceConfig &space) {
    return atomic_transition(1, 1, 2, space) + atomic_transition(2, 1, 2, space);
}

/// |0, a> with |a> = (|1>_1 |2>_2 - |2>_1 |1>_2) / sqrt(2).
[[nodiscard]] inline StateVector trapped_state(const SpaceConfig &space) {
    return (basis_state({0, 1, 2}, space) - basis_state({0, 2, 1}, space)) / std::numbers::sqrt2;
}

/// Positions inside the list returned by dfs_basis().
enum DfsMember : int { kDfs000 = 0, kDfs001 = 1, kDfs010 = 2, kDfs011 = 3, kDfsTrapped = 4 };
inline constexpr int kDfsSize = 5;

inline const std::array<const char *, kDfsSize> &dfs_member_names() {
    static const std::array<const char *, kDfsSize> names{"|0,0,0>", "|0,0,1>", "|0,1,0>",
                                                          "|0,1,1>", "|0,a>"};
    return names;
}

/// {|0,0,0>, |0,0,1>, |0,1,0>, |0,1,1>, |0,a>}: the four zero-photon qubit
/// states plus the trapped state. Dark under the conditional Hamiltonian
/// only when gamma_cav = 0 (the trapped state carries atomic excitation).
[[nodiscard]] inline std::vector<StateVector> dfs_basis(const SpaceConfig &space) {
    space.validate();
    return {basis_state({0, 0, 0}, space), basis_state({0, 0, 1}, space),
            basis_state({0, 1, 0}, space), basis_state({0, 1, 1}, space), trapped_state(space)};
}

[[nodiscard]] inline Operator dfs_projector(const SpaceConfig &space) {
    const auto basis = dfs_basis(space);
    return projector_from_states(basis);
}

/// Dynamic DFS membership: P0(t) = ||exp(-i H_cond t) psi||^2 stays >= 1 - tol
/// on [0, horizon]. P0 is monotone, but a uniform grid is checked anyway so a
/// malformed H (growing norm) is also caught.
[[nodiscard]] inline bool is_decoherence_free(const StateVector &psi, const SystemParams &params,
                                              const SpaceConfig &space, double horizon,
                                              double tol = 1e-10,
                                              const PropagationConfig &cfg = {}) {
    detail::check_dim(psi.size(), space, "state");
    if (std::abs(psi.squaredNorm() - 1.0) > 1e-10) {
        throw InputError("is_decoherence_free: state is not normalized");
    }
    if (!(horizon > 0)) throw InputError("is_decoherence_free: horizon must be > 0");
    const Operator h = conditional_hamiltonian(params, space);
    constexpr int kChecks = 32;
    const double dt = horizon / kChecks;
    StateVector current = psi;
    for (int k = 1; k <= kChecks; ++k) {
        current = propagate(h, current, dt, cfg);
        if (current.squaredNorm() < 1.0 - tol) return false;
    }
    return true;
}

/// Zeno-projected generator P H P, given both in the DFS basis (k x k) and
/// embedded back into the full space.
struct EffectiveHamiltonian {
    Eigen::MatrixXcd reduced;
    Operator embedded;
};

[[nodiscard]] inline EffectiveHamiltonian effective_hamiltonian(const Operator &h_total,
                                                                std::span<const StateVector> dfs) {
    const Eigen::MatrixXcd basis = orthonormal_columns(dfs);
    if (basis.rows() != h_total.rows()) {
        throw InputError("effective_hamiltonian: operator/basis dimension mismatch");
    }
    EffectiveHamiltonian out;
    out.reduced = basis.adjoint() * h_total * basis;
    out.embedded = basis * out.reduced * basis.adjoint();
    return out;
}

/// Emission channels consistent with the decay terms of H_cond:
///   cavity leakage  sqrt(2 kappa) b
///   atom i, 2 -> 1  sqrt(2 beta gamma_cav) |1><2|_i
///   atom i, 2 -> 0  sqrt(2 (1 - beta) gamma_cav) |0><2|_i
/// so that sum_c c^dag c = i (H_cond - H_cond^dag). Channels with zero rate
/// are omitted.
[[nodiscard]] inline std::vector<JumpChannel> jump_channels(const SystemParams &params,
                                                            const SpaceConfig &space,
                                                            double branching = 1.0) {
    params.validate();
    if (!(branching >= 0.0 && branching <= 1.0)) {
        throw InputError("branching ratio must lie in [0, 1]");
    }
    std::vector<JumpChannel> channels;
    if (params.kappa > 0) {
        channels.push_back(
            {"cavity", std::sqrt(2.0 * params.kappa) * annihilation_operator(space), true});
    }
    for (int atom = 1; atom <= 2; ++atom) {
        const double to_one = 2.0 * branching * params.gamma_cav;
        const double to_zero = 2.0 * (1.0 - branching) * params.gamma_cav;
        if (to_one > 0) {
            channels.push_back({"atom" + std::to_string(atom) + ":2->1",
                                std::sqrt(to_one) * atomic_transition(atom, 1, 2, space), true});
        }
        if (to_zero > 0) {
            channels.push_back({"atom" + std::to_string(atom) + ":2->0",
                                std::sqrt(to_zero) * atomic_transition(atom, 0, 2, space), true});
        }
    }
    return channels;
}

/// sum_c c^dag c over the channels.
[[nodiscard]] inline Operator decay_operator(std::span<const JumpChannel> channels, Eigen::Index dim) {
    Operator total = Operator::Zero(dim, dim);
    for (const auto &c : channels) total += c.op.adjoint() * c.op;
    return total;
}

/// V-system basis ordering.
enum VLevel : int { kVGround = 0, kVMetastable = 1, kVShort = 2 };

/// H = 1/2 (Omega_w |g><m| + Omega_s |g><s| + h.c.) - i Gamma_s |s><s| on {g, m, s}.
/// Gamma_s is an amplitude rate, as in the cavity model.
[[nodiscard]] inline Operator v_system_hamiltonian(const VSystemParams &p) {
    Operator h = Operator::Zero(3, 3);
    h(kVGround, kVMetastable) = 0.5 * p.omega_w;
    h(kVMetastable, kVGround) = 0.5 * std::conj(p.omega_w);
    h(kVGround, kVShort) = 0.5 * p.omega_s;
    h(kVShort, kVGround) = 0.5 * std::conj(p.omega_s);
    h(kVShort, kVShort) = Complex(0.0, -p.gamma_s);
    return h;
}

/// The fluorescence channel s -> g of the V-system.
[[nodiscard]] inline std::vector<JumpChannel> v_system_jump_channels(const VSystemParams &p) {
    Operator c = Operator::Zero(3, 3);
    c(kVGround, kVShort) = std::sqrt(2.0 * p.gamma_s);
    return {{"fluorescence", c, true}};
}

}  // namespace zenogate
