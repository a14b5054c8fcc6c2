#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "h10/diophantine.hpp"
#include "h10/evolution.hpp"
#include "h10/fock.hpp"
#include "h10/measurement.hpp"

namespace h10 {

/// {1, 2, 4, ..., t_max}; t_max itself is appended when it is not a power of two.
std::vector<double> doubling_times(double t_max);

struct RunConfig {
    Polynomial polynomial;
    std::uint64_t cutoff = 2;
    /// Coherent-state displacement per mode; empty means 1 for every mode.
    std::vector<Complex> alpha;
    std::vector<double> times = doubling_times(128.0);
    double steps_per_time = 40.0;
    ScheduleProfile profile = ScheduleProfile::Linear;
    std::uint64_t shots = 100'000;
    std::uint64_t seed = 42;
    double theta = 0.5;
    MatchOptions match;
    /// Worker threads for the per-T runs; 0 means hardware concurrency.
    unsigned threads = 1;
    std::size_t dimension_guard = kDefaultDimensionGuard;
    std::size_t dense_guard = kDefaultDenseGuard;

    explicit RunConfig(Polynomial p) : polynomial(std::move(p)) {}

    /// Throws ConfigError on an invalid configuration.
    void validate() const;
    std::vector<Complex> resolved_alpha() const;
};

/// Per-T shot seed: splitmix64(seed XOR splitmix64(bits of T)), with
/// splitmix64(z) the standard finalizer (Steele, Lea, Flood 2014) applied to
/// z + 0x9e3779b97f4a7c15.
std::uint64_t derive_seed(std::uint64_t seed, double time);

struct TimeRecord {
    double time = 0.0;
    std::size_t steps = 0;
    std::uint64_t seed = 0;
    Distribution calculated{std::vector<double>{1.0}};
    ShotRecord measured;
    MatchVerdict match;
    /// Lowest H_P diagonal among sampled indices.
    double level_energy = 0.0;
    /// Sampled indices at that level, ascending.
    std::vector<std::size_t> dominant_indices;
    /// Sampled probability carried by `dominant_indices`.
    double dominant_probability = 0.0;
    bool dominant = false;
    /// Calculated probability on the exact ground level of H_P (diagnostic).
    double ground_population = 0.0;
    double norm_drift = 0.0;
};

enum class DecisionKind { HasSolution, NoSolutionWithinCutoff, Inconclusive };

enum class InconclusiveReason { MatchFailed, NotDominant, UnstableAcrossT, GuardExceeded };

std::string to_string(DecisionKind kind);
std::string to_string(InconclusiveReason reason);

struct Decision {
    DecisionKind kind = DecisionKind::Inconclusive;
    std::vector<EvaluationPoint> witnesses;     // HAS_SOLUTION
    BigInt min_value = 0;                       // NO_SOLUTION_WITHIN_CUTOFF
    std::vector<EvaluationPoint> argmin;        // NO_SOLUTION_WITHIN_CUTOFF
    std::optional<InconclusiveReason> reason;   // INCONCLUSIVE
    std::string detail;
};

struct Caveats {
    bool cutoff_limited = false;
    bool match_failed = false;
    bool not_dominant = false;
};

struct VerificationReport {
    std::vector<TimeRecord> runs;
    bool identified = false;
    /// Every basis index of the H_P level identified as the ground level.
    std::vector<std::size_t> ground_space;
    std::vector<Occupation> ground_tuples;
    std::optional<BigInt> min_energy_observed;
    Decision decision;
    Caveats caveats;
};

/// Runs the evolve / compute / sample / match loop for every T in cfg.times
/// and identifies the ground level: at each T the candidate is the set of
/// sampled indices sharing the lowest sampled H_P diagonal, dominant when its
/// sampled probability exceeds theta. Identification requires the match to
/// pass and the candidate to be dominant at the two largest T, with equal
/// level energy at both. The decision is filled in.
VerificationReport identify_ground_state(const RunConfig& cfg);

/// identify_ground_state(cfg).decision, except that guard violations come
/// back as INCONCLUSIVE(guard-exceeded) rather than as exceptions.
Decision decide(const RunConfig& cfg);

nlohmann::ordered_json to_json(const Decision& decision);
/// Report JSON without a timestamp; field order is fixed.
nlohmann::ordered_json to_json(const VerificationReport& report, const RunConfig& cfg);

} // namespace h10
