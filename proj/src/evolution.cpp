#include "h10/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SparseLU>

#include "h10/error.hpp"

namespace h10 {

WaveFunction::WaveFunction(Eigen::VectorXcd amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) throw DimensionError("wave function must have at least one amplitude");
    if (!amplitudes_.allFinite()) throw NumericError("wave function contains NaN or Inf");
    const double n = amplitudes_.norm();
    if (std::abs(n - 1.0) > kNormTolerance) {
        throw NumericError("wave function is not normalized (norm " + std::to_string(n) + ")");
    }
}

WaveFunction WaveFunction::basis_state(std::size_t dimension, std::size_t index) {
    if (index >= dimension) throw DimensionError("basis index out of range");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dimension));
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return WaveFunction(std::move(v));
}

WaveFunction WaveFunction::normalized(const Eigen::VectorXcd& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw NumericError("cannot normalize a zero or non-finite vector");
    return WaveFunction(v / n);
}

double Schedule::s_at(double step) const {
    const double u = std::clamp(step / static_cast<double>(steps), 0.0, 1.0);
    switch (profile) {
        case ScheduleProfile::Smoothstep: return u * u * (3.0 - 2.0 * u);
        case ScheduleProfile::Linear: break;
    }
    return u;
}

namespace {

double energy_at(const Eigen::VectorXcd& psi, const SparseMatrix& hi, const SparseMatrix& hp, double s) {
    const Eigen::VectorXcd h_psi = (1.0 - s) * (hi * psi) + s * (hp * psi);
    return psi.dot(h_psi).real();
}

} // namespace

double instantaneous_ground_population(const Eigen::VectorXcd& state, const Operator& h_initial,
                                       const Operator& h_problem, double s, double degeneracy_tol) {
    const auto spectrum = spectral_decomposition(interpolate(h_initial, h_problem, s), degeneracy_tol);
    if (static_cast<Eigen::Index>(spectrum.eigenvalues.size()) != state.size()) {
        throw DimensionError("state dimension does not match the Hamiltonian");
    }
    double population = 0.0;
    for (auto col : spectrum.ground_group()) {
        population += std::norm(spectrum.eigenvectors.col(static_cast<Eigen::Index>(col)).dot(state));
    }
    return std::clamp(population, 0.0, 1.0);
}

WaveFunction ground_state(const Operator& h) {
    const auto spectrum = spectral_decomposition(h);
    return WaveFunction::normalized(spectrum.eigenvectors.col(0));
}

Trajectory evolve(const WaveFunction& initial, const Operator& h_initial, const Operator& h_problem,
                  const Schedule& schedule, const EvolveOptions& options) {
    const auto d = static_cast<Eigen::Index>(initial.dimension());
    if (h_initial.dimension() != initial.dimension() || h_problem.dimension() != initial.dimension()) {
        throw DimensionError("state and Hamiltonian dimensions differ");
    }
    if (schedule.steps < 1) throw ConfigError("schedule needs at least one step");
    if (!(schedule.total_time >= 0.0) || !std::isfinite(schedule.total_time)) {
        throw ConfigError("total evolution time must be finite and non-negative");
    }

    const SparseMatrix hi = h_initial.to_sparse();
    const SparseMatrix hp = h_problem.to_sparse();
    SparseMatrix identity(d, d);
    identity.setIdentity();

    const double dt = schedule.total_time / static_cast<double>(schedule.steps);
    const Complex half_step(0.0, dt / 2.0);
    const std::size_t stride =
        options.checkpoint_stride ? options.checkpoint_stride : std::max<std::size_t>(1, schedule.steps / 100);

    auto checkpoint = [&](double s, const Eigen::VectorXcd& psi) {
        Checkpoint c;
        c.s = s;
        c.amplitudes = psi;
        c.norm = psi.norm();
        c.energy = energy_at(psi, hi, hp, s);
        if (options.track_ground_population) {
            c.ground_population =
                instantaneous_ground_population(psi, h_initial, h_problem, s, options.degeneracy_tol);
        }
        return c;
    };

    // The sum below keeps the union sparsity pattern of H_I and H_P (explicit
    // zeros included), so one symbolic analysis serves every step.
    auto system = [&](double s) -> SparseMatrix {
        SparseMatrix a = identity + (half_step * (1.0 - s)) * hi + (half_step * s) * hp;
        a.makeCompressed();
        return a;
    };

    Eigen::SparseLU<SparseMatrix> lu;
    lu.analyzePattern(system(0.0));

    Trajectory out;
    Eigen::VectorXcd psi = initial.amplitudes();
    out.checkpoints.push_back(checkpoint(schedule.s_at(0.0), psi));
    const double start_norm = psi.norm();
    double previous_norm = start_norm;

    for (std::size_t step = 0; step < schedule.steps; ++step) {
        const double s_mid = schedule.s_at(static_cast<double>(step) + 0.5);
        const SparseMatrix a = system(s_mid);
        lu.factorize(a);
        if (lu.info() != Eigen::Success) {
            throw NumericError("Cayley step " + std::to_string(step) + " at s=" + std::to_string(s_mid) +
                               ": factorization failed (" + lu.lastErrorMessage() + ")");
        }
        const Eigen::VectorXcd h_psi = (1.0 - s_mid) * (hi * psi) + s_mid * (hp * psi);
        const Eigen::VectorXcd rhs = psi - half_step * h_psi;
        psi = lu.solve(rhs);
        if (lu.info() != Eigen::Success) {
            throw NumericError("Cayley step " + std::to_string(step) + ": linear solve failed");
        }
        if (!psi.allFinite()) {
            throw NumericError("non-finite amplitude after step " + std::to_string(step) +
                               " at s=" + std::to_string(s_mid));
        }
        const double n = psi.norm();
        out.max_step_drift = std::max(out.max_step_drift, std::abs(n - previous_norm));
        previous_norm = n;

        const std::size_t done = step + 1;
        if (done % stride == 0 || done == schedule.steps) {
            out.checkpoints.push_back(checkpoint(schedule.s_at(static_cast<double>(done)), psi));
        }
    }
    out.cumulative_drift = std::abs(previous_norm - start_norm);
    out.final_amplitudes = std::move(psi);
    return out;
}

} // namespace h10
