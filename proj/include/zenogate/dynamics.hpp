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

/// Quantum-jump observables built on the conditional evolution:
/// no-emission probability, emission intensity, first-emission waiting
/// times (sampled and by quadrature), full jump trajectories, and the decay
/// spectrum of the states outside the decoherence-free subspace.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Eigenvalues>

#include "zenogate/hilbert.hpp"
#include "zenogate/model.hpp"
#include "zenogate/parallel.hpp"
#include "zenogate/propagate.hpp"

namespace zenogate {

/// Squared norms above 1 + this are treated as an integrator fault.
inline constexpr double kNormExcessTolerance = 1e-8;

/// P0 = <psi(t)|psi(t)>, for psi(t) evolved from a normalized state.
[[nodiscard]] inline double no_emission_probability(const StateVector &psi_t) {
    const double p = psi_t.squaredNorm();
    if (p > 1.0 + kNormExcessTolerance) {
        throw IntegratorError("squared norm " + std::to_string(p) +
                                  " exceeds 1: conditional evolution is inconsistent",
                              p - 1.0);
    }
    return std::clamp(p, 0.0, 1.0);
}

/// I(psi) = i <psi|H - H^dagger|psi> = -dP0/dt at t = 0.
[[nodiscard]] inline double emission_intensity(const Operator &h, const StateVector &psi) {
    if (h.cols() != psi.size()) throw InputError("emission_intensity: dimension mismatch");
    const Complex value = Complex(0.0, 1.0) * psi.dot((h - h.adjoint()) * psi);
    return std::max(0.0, value.real());
}

/// psi / ||psi||: the state given that no photon was seen.
[[nodiscard]] inline StateVector conditional_state(const StateVector &psi_t) {
    const double norm = psi_t.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw UndefinedStateError("conditional state of a zero vector is undefined");
    }
    return psi_t / norm;
}

/// SplitMix64. Substreams for (seed, id) are derived by hashing both, so
/// every trajectory owns an independent, reproducible stream regardless of
/// which thread runs it.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    static RngStream substream(std::uint64_t seed, std::uint64_t id) {
        RngStream root(seed);
        const std::uint64_t base = root.next_u64();
        RngStream mixer(base ^ (id * 0xD1B54A32D192ED03ULL));
        return RngStream(mixer.next_u64());
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in the open interval (0, 1).
    double uniform_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

struct EmissionRecord {
    double time = 0.0;
    int channel = -1;
    std::uint64_t trajectory = 0;
    bool emitted = false;  // false: no emission within the horizon, time = horizon

    friend bool operator==(const EmissionRecord &, const EmissionRecord &) = default;
};

/// P0(t) for one (H, psi0) pair, tabulated on a geometric checkpoint grid
/// over [0, horizon] so that P0(t) = u can be bracketed and then solved.
class NoEmissionCurve {
public:
    NoEmissionCurve(const Operator &h, const StateVector &psi0, double horizon,
                    double growth = 1.1)
        : h_(h), horizon_(horizon) {
        if (h.rows() != h.cols() || h.cols() != psi0.size()) {
            throw InputError("NoEmissionCurve: dimension mismatch");
        }
        if (!(horizon > 0)) throw InputError("NoEmissionCurve: horizon must be > 0");
        const double scale = std::max(1.0, h.cwiseAbs().rowwise().sum().maxCoeff());
        double t = std::min(horizon, 0.05 / scale);
        times_.push_back(0.0);
        states_.push_back(psi0);
        p0_.push_back(psi0.squaredNorm());
        while (true) {
            const double dt = t - times_.back();
            states_.push_back(propagator(h_, dt) * states_.back());
            times_.push_back(t);
            p0_.push_back(no_emission_probability(states_.back()));
            if (t >= horizon) break;
            t = std::min(horizon, t * growth);
        }
    }

    [[nodiscard]] double horizon() const { return horizon_; }
    [[nodiscard]] double p0_at_horizon() const { return p0_.back(); }
    [[nodiscard]] const Operator &hamiltonian() const { return h_; }

    /// Unnormalized conditional state at t in [0, horizon].
    [[nodiscard]] StateVector state(double t) const {
        if (t < 0 || t > horizon_) throw InputError("NoEmissionCurve: time outside [0, horizon]");
        const auto it = std::upper_bound(times_.begin(), times_.end(), t);
        const auto k = static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1;
        const double dt = t - times_[k];
        return dt == 0.0 ? states_[k] : StateVector(propagator(h_, dt) * states_[k]);
    }

    [[nodiscard]] double p0(double t) const { return no_emission_probability(state(t)); }

    /// Smallest t with P0(t) = u, to relative accuracy rel_tol; empty if
    /// P0 stays above u up to the horizon.
    [[nodiscard]] std::optional<double> solve(double u, double rel_tol = 1e-10) const {
        if (p0_.back() > u) return std::nullopt;
        const auto it = std::partition_point(p0_.begin(), p0_.end(),
                                             [u](double p) { return p > u; });
        const auto k = static_cast<std::size_t>(std::distance(p0_.begin(), it));
        if (k == 0) return 0.0;
        double lo = times_[k - 1];
        double hi = times_[k];
        StateVector psi_lo = states_[k - 1];
        // Newton on ln P0 (slope -I / P0), falling back to bisection whenever
        // the step leaves the bracket.
        const double log_u = std::log(u);
        const double span_log = std::log(p0_[k - 1] / p0_[k]);
        double t = span_log > 0 ? lo + (hi - lo) * std::log(p0_[k - 1] / u) / span_log
                                : 0.5 * (lo + hi);
        for (int iter = 0; iter < 200; ++iter) {
            if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
            StateVector psi_t = propagator(h_, t - lo) * psi_lo;
            const double p = psi_t.squaredNorm();
            const double rate = p > 0 ? emission_intensity(h_, psi_t) / p : 0.0;
            double next = rate > 0 ? t + (std::log(p) - log_u) / rate : 0.5 * (lo + hi);
            if (p > u) {
                lo = t;
                psi_lo = std::move(psi_t);
            } else {
                hi = t;
            }
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - t) <= rel_tol * next || hi - lo <= rel_tol * hi) return next;
            t = next;
        }
        return 0.5 * (lo + hi);
    }

private:
    Operator h_;
    double horizon_;
    std::vector<double> times_;
    std::vector<StateVector> states_;
    std::vector<double> p0_;
};

namespace detail {

inline int draw_channel(std::span<const JumpChannel> channels, const StateVector &psi,
                        RngStream &rng) {
    if (channels.empty()) return -1;
    std::vector<double> weights;
    weights.reserve(channels.size());
    double total = 0.0;
    for (const auto &c : channels) {
        weights.push_back((c.op * psi).squaredNorm());
        total += weights.back();
    }
    const double r = rng.uniform_open() * total;
    double acc = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        acc += weights[k];
        if (r < acc) return static_cast<int>(k);
    }
    // total == 0 only if psi is dark to every channel; report the last one
    return static_cast<int>(channels.size()) - 1;
}

}  // namespace detail

/// One waiting-time draw: u ~ U(0,1), then P0(t) = u. The emitting channel is
/// drawn with weights <psi(t)|c^dag c|psi(t)>.
[[nodiscard]] inline EmissionRecord sample_first_emission_time(
    const NoEmissionCurve &curve, std::span<const JumpChannel> channels, RngStream &rng,
    std::uint64_t trajectory_id = 0) {
    EmissionRecord rec;
    rec.trajectory = trajectory_id;
    const double u = rng.uniform_open();
    const auto t = curve.solve(u);
    if (!t) {
        rec.time = curve.horizon();
        return rec;
    }
    rec.time = *t;
    rec.emitted = true;
    rec.channel = detail::draw_channel(channels, curve.state(*t), rng);
    return rec;
}

[[nodiscard]] inline EmissionRecord sample_first_emission_time(
    const Operator &h, const StateVector &psi0, RngStream &rng, double t_max,
    std::span<const JumpChannel> channels = {}) {
    const NoEmissionCurve curve(h, psi0, t_max);
    return sample_first_emission_time(curve, channels, rng);
}

struct TrajectoryConfig {
    std::uint64_t seed = 1;
    std::size_t n_trajectories = 1;
    double t_max = 100.0;
    std::vector<JumpChannel> channels;
    int jobs = 1;

    void validate() const {
        if (n_trajectories < 1) throw InputError("need at least one trajectory");
        if (!(t_max > 0)) throw InputError("trajectory horizon must be > 0");
    }
};

/// First-emission records for an ensemble; record i uses substream (seed, i).
[[nodiscard]] inline std::vector<EmissionRecord> sample_first_emission_times(
    const Operator &h, const StateVector &psi0, const TrajectoryConfig &cfg) {
    cfg.validate();
    const NoEmissionCurve curve(h, psi0, cfg.t_max);
    std::vector<EmissionRecord> out(cfg.n_trajectories);
    parallel_for(cfg.n_trajectories, cfg.jobs, [&](std::size_t i) {
        RngStream rng = RngStream::substream(cfg.seed, i);
        out[i] = sample_first_emission_time(curve, cfg.channels, rng, i);
    });
    return out;
}

struct MonteCarloMean {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t emitted = 0;
    std::size_t censored = 0;  // records with no emission inside the horizon
};

[[nodiscard]] inline MonteCarloMean summarize_waiting_times(std::span<const EmissionRecord> records) {
    MonteCarloMean out;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto &r : records) {
        if (!r.emitted) {
            ++out.censored;
            continue;
        }
        ++out.emitted;
        sum += r.time;
        sum_sq += r.time * r.time;
    }
    if (out.emitted == 0) return out;
    const auto n = static_cast<double>(out.emitted);
    out.mean = sum / n;
    if (out.emitted > 1) {
        const double var = std::max(0.0, (sum_sq - n * out.mean * out.mean) / (n - 1.0));
        out.standard_error = std::sqrt(var / n);
    }
    return out;
}

struct MeanTimeConfig {
    double t_max = 1e3;
    double rel_tol = 1e-10;
    /// P0(t_max) above this marks the result as a lower bound.
    double lower_bound_threshold = 1e-4;
};

struct MeanEmissionTime {
    double value = 0.0;
    double error_estimate = 0.0;
    double p0_at_horizon = 0.0;
    double tail = 0.0;
    bool lower_bound = false;
};

namespace detail {

/// Y(w) = integral over [0, w] of exp(iH^dag s) exp(-iH s) ds together with
/// U(w) = exp(-iHw), so that the integral of ||exp(-iHs) psi||^2 over
/// [0, w] is <psi|Y(w)|psi>. Y is taken from the block exponential
/// exp([[-iH^dag, 1], [0, -iH]] w0) on a short base width w0 and extended by
/// Y(2w) = Y(w) + U(w)^dag Y(w) U(w); the base is short enough that no block
/// grows large.
struct NormIntegral {
    Operator y;
    Operator u;
};

inline NormIntegral norm_integral(const Operator &h, double w) {
    const auto dim = h.rows();
    const double scale = std::max(1.0, h.cwiseAbs().rowwise().sum().maxCoeff());
    int doublings = 0;
    double base = w;
    while (base * scale > 1.0) {
        base /= 2.0;
        ++doublings;
    }
    Operator block = Operator::Zero(2 * dim, 2 * dim);
    block.topLeftCorner(dim, dim) = Complex(0.0, -base) * h.adjoint();
    block.topRightCorner(dim, dim) = base * Operator::Identity(dim, dim);
    block.bottomRightCorner(dim, dim) = Complex(0.0, -base) * h;
    const Operator e = block.exp();
    NormIntegral out;
    out.u = e.bottomRightCorner(dim, dim);
    out.y = out.u.adjoint() * e.topRightCorner(dim, dim);
    for (int k = 0; k < doublings; ++k) {
        out.y += out.u.adjoint() * out.y * out.u;
        out.y = 0.5 * (out.y + out.y.adjoint()).eval();
        out.u = out.u * out.u;
    }
    return out;
}

}  // namespace detail

/// Mean first-emission time, integral of P0(t) over [0, inf). P0 is
/// integrated exactly over [0, t_max] (see detail::norm_integral), so no
/// time grid can alias the slow oscillations of the conditional state. Past
/// the horizon the integrand is followed in panels of t_max / 8 until P0 / r
/// is below rel_tol of the total, r being the local decay rate
/// I(psi / ||psi||), and that remainder is added as an exponential tail. No
/// sampling noise. If P0(t_max) is still above the threshold the value stops
/// at t_max and is flagged as a lower bound.
[[nodiscard]] inline MeanEmissionTime mean_first_emission_time(const Operator &h,
                                                               const StateVector &psi0,
                                                               const MeanTimeConfig &cfg) {
    if (!(cfg.t_max > 0)) throw InputError("mean_first_emission_time: t_max must be > 0");
    if (std::abs(psi0.squaredNorm() - 1.0) > 1e-10) {
        throw InputError("mean_first_emission_time: initial state is not normalized");
    }
    MeanEmissionTime out;
    double integral = 0.0;
    int panels = 0;
    StateVector psi_a = psi0;
    const auto integrate_panel = [&](const detail::NormIntegral &panel) {
        integral += psi_a.dot(panel.y * psi_a).real();
        psi_a = panel.u * psi_a;
        ++panels;
    };
    integrate_panel(detail::norm_integral(h, cfg.t_max));
    out.p0_at_horizon = no_emission_probability(psi_a);
    const auto local_rate = [&] {
        return psi_a.squaredNorm() > 0 ? emission_intensity(h, conditional_state(psi_a)) : 0.0;
    };
    out.lower_bound = out.p0_at_horizon > cfg.lower_bound_threshold || !(local_rate() > 0);
    double closing = 0.0;
    if (!out.lower_bound) {
        // Follow the integrand until the remainder is negligible, then close
        // with P0 / rate (exact for a single slowest mode).
        const double before = integral;
        const auto tail_panel = detail::norm_integral(h, cfg.t_max / 8.0);
        for (int k = 0; k < 256; ++k) {
            const double rate = local_rate();
            if (!(rate > 0) || psi_a.squaredNorm() / rate <= cfg.rel_tol * integral) break;
            integrate_panel(tail_panel);
        }
        const double rate = local_rate();
        closing = rate > 0 ? psi_a.squaredNorm() / rate : 0.0;
        out.tail = integral - before + closing;
        integral += closing;
    }
    out.value = integral;
    // rounding in the doubling steps, plus the unverified closing term
    out.error_estimate = closing + 64.0 * panels * std::numeric_limits<double>::epsilon() * integral;
    return out;
}

struct Trajectory {
    std::vector<EmissionRecord> jumps;
    StateVector final_state;  // normalized conditional state at t_max
    double t_max = 0.0;
};

/// Monte Carlo wave-function trajectory: conditional evolution under h,
/// interrupted by jumps psi -> c psi / ||c psi||, until t_max.
[[nodiscard]] inline Trajectory run_trajectory(const Operator &h, const StateVector &psi0,
                                               std::span<const JumpChannel> channels,
                                               RngStream &rng, double t_max,
                                               std::uint64_t trajectory_id = 0) {
    if (!(t_max > 0)) throw InputError("run_trajectory: t_max must be > 0");
    Trajectory traj;
    traj.t_max = t_max;
    double t = 0.0;
    StateVector psi = conditional_state(psi0);
    while (true) {
        const NoEmissionCurve curve(h, psi, t_max - t);
        const double u = rng.uniform_open();
        const auto tau = curve.solve(u);
        if (!tau || !(*tau > 0.0)) {
            traj.final_state = conditional_state(curve.state(curve.horizon()));
            return traj;
        }
        const StateVector psi_tau = curve.state(*tau);
        const int ch = detail::draw_channel(channels, psi_tau, rng);
        if (ch < 0) {
            throw InputError("run_trajectory: state decays but no jump channels were given");
        }
        t += *tau;
        traj.jumps.push_back({t, ch, trajectory_id, true});
        psi = conditional_state(channels[static_cast<std::size_t>(ch)].op * psi_tau);
        if (t >= t_max) {
            traj.final_state = psi;
            return traj;
        }
    }
}

/// Decay rates -2 Im(lambda) of h restricted to the orthogonal complement of
/// span(dfs), sorted ascending.
[[nodiscard]] inline std::vector<double> non_dfs_decay_rates(const Operator &h,
                                                             std::span<const StateVector> dfs) {
    const Eigen::MatrixXcd basis = orthonormal_columns(dfs);
    const auto dim = h.rows();
    const Operator complement_projector =
        Operator::Identity(dim, dim) - basis * basis.adjoint();
    const Eigen::SelfAdjointEigenSolver<Operator> proj_eig(complement_projector);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < dim; ++k) {
        if (proj_eig.eigenvalues()(k) > 0.5) keep.push_back(k);
    }
    Eigen::MatrixXcd comp(dim, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        comp.col(static_cast<Eigen::Index>(k)) = proj_eig.eigenvectors().col(keep[k]);
    }
    const Eigen::MatrixXcd restricted = comp.adjoint() * h * comp;
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(restricted, false);
    std::vector<double> rates;
    rates.reserve(keep.size());
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
        rates.push_back(-2.0 * eig.eigenvalues()(k).imag());
    }
    std::sort(rates.begin(), rates.end());
    return rates;
}

/// Time over which an arbitrary non-DFS state has emitted with certainty,
/// estimated as 1 / (slowest complement decay rate), next to the two
/// order-of-magnitude anchors 1/kappa and kappa/g^2.
struct MeasurementTimeEstimate {
    double slowest_rate = 0.0;
    double delta_t = 0.0;
    double inverse_kappa = 0.0;
    double kappa_over_g2 = 0.0;
};

[[nodiscard]] inline MeasurementTimeEstimate measurement_time_estimate(
    std::span<const double> rates, const SystemParams &params) {
    MeasurementTimeEstimate est;
    est.slowest_rate = std::numeric_limits<double>::infinity();
    for (double r : rates) {
        if (r > 0) est.slowest_rate = std::min(est.slowest_rate, r);
    }
    est.delta_t = std::isfinite(est.slowest_rate) ? 1.0 / est.slowest_rate
                                                  : std::numeric_limits<double>::infinity();
    est.inverse_kappa = params.kappa > 0 ? 1.0 / params.kappa
                                         : std::numeric_limits<double>::infinity();
    est.kappa_over_g2 = params.kappa / (params.g * params.g);
    return est;
}

}  // namespace zenogate
