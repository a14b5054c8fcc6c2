#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "h10/fock.hpp"

namespace h10 {

/// Complex amplitudes over a truncated basis, normalized within 1e-9.
class WaveFunction {
public:
    static constexpr double kNormTolerance = 1e-9;

    /// Throws NumericError when the vector is not normalized or not finite.
    explicit WaveFunction(Eigen::VectorXcd amplitudes);

    static WaveFunction basis_state(std::size_t dimension, std::size_t index);
    /// Rescales an arbitrary nonzero vector to unit norm.
    static WaveFunction normalized(const Eigen::VectorXcd& v);

    const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
    double norm() const { return amplitudes_.norm(); }

private:
    Eigen::VectorXcd amplitudes_;
};

enum class ScheduleProfile {
    Linear,     // s = t/T
    Smoothstep, // s = 3u^2 - 2u^3, u = t/T
};

struct Schedule {
    double total_time = 1.0;
    std::size_t steps = 1;
    ScheduleProfile profile = ScheduleProfile::Linear;

    /// s at fractional step position `step` in [0, steps].
    double s_at(double step) const;
};

struct Checkpoint {
    double s = 0.0;
    Eigen::VectorXcd amplitudes;
    std::optional<double> ground_population;
    double energy = 0.0; // <psi|H(s)|psi>
    double norm = 1.0;
};

struct Trajectory {
    std::vector<Checkpoint> checkpoints;
    Eigen::VectorXcd final_amplitudes;
    double max_step_drift = 0.0; // largest | ||psi_{j+1}|| - ||psi_j|| |
    double cumulative_drift = 0.0; // | ||psi_M|| - ||psi_0|| |
};

struct EvolveOptions {
    /// 0 selects max(1, steps/100).
    std::size_t checkpoint_stride = 0;
    /// Diagonalizes H(s) at each checkpoint; expensive for large bases.
    bool track_ground_population = true;
    double degeneracy_tol = -1.0;
};

/// Integrates i d/dt psi = H(s(t)) psi with the midpoint Cayley step
///   psi <- (I + i dt H(s_mid)/2)^{-1} (I - i dt H(s_mid)/2) psi,  dt = T/M.
/// Throws NumericError on a failed factorization or a non-finite state.
Trajectory evolve(const WaveFunction& initial, const Operator& h_initial, const Operator& h_problem,
                  const Schedule& schedule, const EvolveOptions& options = {});

/// Squared projection of `state` onto the (possibly degenerate) ground
/// eigenspace of H(s) = (1-s) H_I + s H_P.
double instantaneous_ground_population(const Eigen::VectorXcd& state, const Operator& h_initial,
                                       const Operator& h_problem, double s,
                                       double degeneracy_tol = -1.0);

/// Ground vector of `h` (first eigenvector of the lowest level).
WaveFunction ground_state(const Operator& h);

} // namespace h10
