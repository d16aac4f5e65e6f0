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

/// State and operator primitives for one cavity mode (Fock space truncated
/// at n_max) coupled to two three-level atoms.
///
/// Basis ordering is row-major over (n, j1, j2) with the photon number
/// slowest:
///
///     index = 9 * n + 3 * j1 + j2
///
/// so the zero-photon block occupies the leading 9 indices.

#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zenogate/error.hpp"

namespace zenogate {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr int kAtomLevels = 3;
inline constexpr int kAtomPairDim = kAtomLevels * kAtomLevels;

struct SpaceConfig {
    int n_max = 2;

    [[nodiscard]] constexpr int dim() const { return (n_max + 1) * kAtomPairDim; }

    void validate() const {
        if (n_max < 1) {
            throw InputError("photon truncation n_max must be >= 1, got " + std::to_string(n_max));
        }
    }

    friend constexpr bool operator==(const SpaceConfig &, const SpaceConfig &) = default;
};

/// |n, j1, j2>: n cavity photons, atom 1 in level j1, atom 2 in level j2.
struct BasisLabel {
    int n = 0;
    int j1 = 0;
    int j2 = 0;

    friend constexpr bool operator==(const BasisLabel &, const BasisLabel &) = default;
};

inline std::string to_string(const BasisLabel &label) {
    return "|" + std::to_string(label.n) + "," + std::to_string(label.j1) + "," +
           std::to_string(label.j2) + ">";
}

namespace detail {

inline void check_level(int level, const char *what) {
    if (level < 0 || level >= kAtomLevels) {
        throw InputError(std::string(what) + " must be in {0,1,2}, got " + std::to_string(level));
    }
}

inline void check_atom(int atom) {
    if (atom != 1 && atom != 2) {
        throw InputError("atom index must be 1 or 2, got " + std::to_string(atom));
    }
}

inline void check_dim(Eigen::Index got, const SpaceConfig &space, const char *what) {
    if (got != space.dim()) {
        throw InputError(std::string(what) + " has dimension " + std::to_string(got) +
                         ", space expects " + std::to_string(space.dim()));
    }
}

}  // namespace detail

[[nodiscard]] inline int basis_index(const BasisLabel &label, const SpaceConfig &space) {
    space.validate();
    if (label.n < 0 || label.n > space.n_max) {
        throw InputError("photon number " + std::to_string(label.n) + " outside [0, " +
                         std::to_string(space.n_max) + "]");
    }
    detail::check_level(label.j1, "level j1");
    detail::check_level(label.j2, "level j2");
    return kAtomPairDim * label.n + kAtomLevels * label.j1 + label.j2;
}

[[nodiscard]] inline BasisLabel basis_label(int index, const SpaceConfig &space) {
    space.validate();
    if (index < 0 || index >= space.dim()) {
        throw InputError("basis index " + std::to_string(index) + " outside [0, " +
                         std::to_string(space.dim()) + ")");
    }
    return {index / kAtomPairDim, (index % kAtomPairDim) / kAtomLevels, index % kAtomLevels};
}

[[nodiscard]] inline StateVector basis_state(const BasisLabel &label, const SpaceConfig &space) {
    StateVector psi = StateVector::Zero(space.dim());
    psi(basis_index(label, space)) = 1.0;
    return psi;
}

[[nodiscard]] inline Operator identity(const SpaceConfig &space) {
    space.validate();
    return Operator::Identity(space.dim(), space.dim());
}

/// Cavity annihilation operator b. The top Fock level maps downward only;
/// nothing is mapped into n_max + 1.
[[nodiscard]] inline Operator annihilation_operator(const SpaceConfig &space) {
    space.validate();
    Operator b = Operator::Zero(space.dim(), space.dim());
    for (int n = 1; n <= space.n_max; ++n) {
        const double amp = std::sqrt(static_cast<double>(n));
        for (int j1 = 0; j1 < kAtomLevels; ++j1) {
            for (int j2 = 0; j2 < kAtomLevels; ++j2) {
                b(basis_index({n - 1, j1, j2}, space), basis_index({n, j1, j2}, space)) = amp;
            }
        }
    }
    return b;
}

[[nodiscard]] inline Operator number_operator(const SpaceConfig &space) {
    const Operator b = annihilation_operator(space);
    return b.adjoint() * b;
}

/// |j><k| on atom `atom` (1 or 2), identity on the other atom and the cavity.
[[nodiscard]] inline Operator atomic_transition(int atom, int j, int k, const SpaceConfig &space) {
    space.validate();
    detail::check_atom(atom);
    detail::check_level(j, "level j");
    detail::check_level(k, "level k");
    Operator op = Operator::Zero(space.dim(), space.dim());
    for (int n = 0; n <= space.n_max; ++n) {
        for (int other = 0; other < kAtomLevels; ++other) {
            const BasisLabel from = atom == 1 ? BasisLabel{n, k, other} : BasisLabel{n, other, k};
            const BasisLabel to = atom == 1 ? BasisLabel{n, j, other} : BasisLabel{n, other, j};
            op(basis_index(to, space), basis_index(from, space)) = 1.0;
        }
    }
    return op;
}

/// <a|b>, conjugate-linear in the first argument.
[[nodiscard]] inline Complex inner_product(const StateVector &a, const StateVector &b) {
    if (a.size() != b.size()) {
        throw InputError("inner product of vectors with dimensions " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
    }
    return a.dot(b);
}

[[nodiscard]] inline Operator hermitian_part(const Operator &h) { return 0.5 * (h + h.adjoint()); }

/// (H - H^dagger) / 2. For a conditional Hamiltonian this is -i times a
/// positive semi-definite decay operator.
[[nodiscard]] inline Operator anti_hermitian_part(const Operator &h) {
    return 0.5 * (h - h.adjoint());
}

inline constexpr double kOrthonormalityTolerance = 1e-10;

/// Column matrix whose columns are the given states, after checking that
/// they are orthonormal to `tol`.
[[nodiscard]] inline Eigen::MatrixXcd orthonormal_columns(std::span<const StateVector> states,
                                                          double tol = kOrthonormalityTolerance) {
    if (states.empty()) {
        throw InputError("need at least one state");
    }
    const auto dim = states.front().size();
    Eigen::MatrixXcd cols(dim, static_cast<Eigen::Index>(states.size()));
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (states[k].size() != dim) {
            throw InputError("states have mismatched dimensions");
        }
        cols.col(static_cast<Eigen::Index>(k)) = states[k];
    }
    const Eigen::MatrixXcd gram = cols.adjoint() * cols;
    const double dev =
        (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (dev > tol) {
        throw InputError("states are not orthonormal (Gram deviation " + std::to_string(dev) + ")");
    }
    return cols;
}

/// Projector onto span(states); states must be pairwise orthonormal.
[[nodiscard]] inline Operator projector_from_states(std::span<const StateVector> states,
                                                    double tol = kOrthonormalityTolerance) {
    const Eigen::MatrixXcd cols = orthonormal_columns(states, tol);
    return cols * cols.adjoint();
}

}  // namespace zenogate
