#include "h10/verification.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "h10/error.hpp"

namespace h10 {

std::vector<double> doubling_times(double t_max) {
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("T_max must be positive and finite");
    std::vector<double> out;
    for (double t = 1.0; t <= t_max; t *= 2.0) out.push_back(t);
    if (out.empty() || out.back() < t_max) out.push_back(t_max);
    return out;
}

void RunConfig::validate() const {
    if (times.empty()) throw ConfigError("at least one evolution time is required");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0) || !std::isfinite(times[i])) throw ConfigError("evolution times must be positive");
        if (i > 0 && !(times[i] > times[i - 1])) throw ConfigError("evolution times must be strictly increasing");
    }
    if (!(theta > 0.0 && theta < 1.0)) throw ConfigError("dominance threshold theta must lie in (0,1)");
    if (shots < 100) throw ConfigError("at least 100 shots per run are required");
    if (!(steps_per_time > 0.0) || !std::isfinite(steps_per_time)) {
        throw ConfigError("steps per unit time must be positive");
    }
    if (!(match.c > 0.0)) throw ConfigError("match constant c must be positive");
    if (!alpha.empty() && alpha.size() != polynomial.arity()) {
        throw ConfigError("alpha needs one entry per variable");
    }
}

std::vector<Complex> RunConfig::resolved_alpha() const {
    return alpha.empty() ? std::vector<Complex>(polynomial.arity(), Complex(1.0, 0.0)) : alpha;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Problem {
    FockBasis basis;
    Operator h_initial;
    Operator h_problem;
    WaveFunction start;
};

TimeRecord run_one(const RunConfig& cfg, const Problem& problem, double time) {
    TimeRecord rec;
    rec.time = time;
    rec.steps = static_cast<std::size_t>(std::max(1.0, std::ceil(time * cfg.steps_per_time - 1e-9)));
    rec.seed = derive_seed(cfg.seed, time);

    EvolveOptions opts;
    opts.track_ground_population = false;
    opts.checkpoint_stride = rec.steps;
    const Schedule schedule{time, rec.steps, cfg.profile};
    const Trajectory traj = evolve(problem.start, problem.h_initial, problem.h_problem, schedule, opts);
    rec.norm_drift = traj.cumulative_drift;

    rec.calculated = born_distribution(traj.final_amplitudes);
    rec.measured = sample(rec.calculated, cfg.shots, rec.seed);
    rec.match = match_verdict(rec.calculated, rec.measured, cfg.match);

    const Eigen::VectorXd& diag = problem.h_problem.diagonal();
    rec.level_energy = std::numeric_limits<double>::infinity();
    for (const auto& [index, count] : rec.measured.counts) {
        rec.level_energy = std::min(rec.level_energy, diag[static_cast<Eigen::Index>(index)]);
    }
    std::uint64_t level_count = 0;
    for (const auto& [index, count] : rec.measured.counts) {
        if (diag[static_cast<Eigen::Index>(index)] == rec.level_energy) {
            rec.dominant_indices.push_back(index);
            level_count += count;
        }
    }
    rec.dominant_probability = static_cast<double>(level_count) / static_cast<double>(cfg.shots);
    rec.dominant = rec.dominant_probability > cfg.theta;

    const double ground = diag.minCoeff();
    for (Eigen::Index j = 0; j < diag.size(); ++j) {
        if (diag[j] == ground) rec.ground_population += rec.calculated[static_cast<std::size_t>(j)];
    }
    return rec;
}

std::vector<TimeRecord> run_all(const RunConfig& cfg, const Problem& problem) {
    std::vector<TimeRecord> records(cfg.times.size());
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        std::min<unsigned>(cfg.threads == 0 ? hw : cfg.threads, static_cast<unsigned>(cfg.times.size()));

    if (workers <= 1) {
        for (std::size_t i = 0; i < cfg.times.size(); ++i) records[i] = run_one(cfg, problem, cfg.times[i]);
        return records;
    }

    // Longest runs first; results land in their own slots so the outcome does
    // not depend on scheduling.
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t k = next.fetch_add(1);
                    if (k >= cfg.times.size()) return;
                    const std::size_t i = cfg.times.size() - 1 - k;
                    try {
                        records[i] = run_one(cfg, problem, cfg.times[i]);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
    return records;
}

} // namespace

std::uint64_t derive_seed(std::uint64_t seed, double time) {
    return splitmix64(seed ^ splitmix64(std::bit_cast<std::uint64_t>(time)));
}

std::string to_string(DecisionKind kind) {
    switch (kind) {
        case DecisionKind::HasSolution: return "HAS_SOLUTION";
        case DecisionKind::NoSolutionWithinCutoff: return "NO_SOLUTION_WITHIN_CUTOFF";
        case DecisionKind::Inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

std::string to_string(InconclusiveReason reason) {
    switch (reason) {
        case InconclusiveReason::MatchFailed: return "match-failed";
        case InconclusiveReason::NotDominant: return "not-dominant";
        case InconclusiveReason::UnstableAcrossT: return "unstable-across-T";
        case InconclusiveReason::GuardExceeded: return "guard-exceeded";
    }
    return "guard-exceeded";
}

VerificationReport identify_ground_state(const RunConfig& cfg) {
    cfg.validate();
    FockBasis basis(cfg.polynomial.arity(), cfg.cutoff, cfg.dimension_guard);
    if (basis.dimension() > cfg.dense_guard) {
        throw GuardError("basis dimension " + std::to_string(basis.dimension()) +
                         " exceeds dense eigensolver guard " + std::to_string(cfg.dense_guard));
    }
    Operator h_initial = build_initial_hamiltonian(basis, cfg.resolved_alpha());
    Operator h_problem = build_problem_hamiltonian(cfg.polynomial, basis);
    WaveFunction start = ground_state(h_initial);
    const Problem problem{std::move(basis), std::move(h_initial), std::move(h_problem), std::move(start)};

    VerificationReport report;
    report.runs = run_all(cfg, problem);
    for (const auto& r : report.runs) {
        report.caveats.match_failed |= !r.match.pass;
        report.caveats.not_dominant |= !r.dominant;
    }

    const std::size_t n = report.runs.size();
    const std::size_t first = n >= 2 ? n - 2 : 0;
    auto tail = [&](auto pred) {
        return std::any_of(report.runs.begin() + static_cast<std::ptrdiff_t>(first), report.runs.end(), pred);
    };

    Decision& decision = report.decision;
    if (tail([](const TimeRecord& r) { return !r.match.pass; })) {
        decision.reason = InconclusiveReason::MatchFailed;
        decision.detail = "calculated and measured distributions disagree at the largest evolution times";
    } else if (tail([](const TimeRecord& r) { return !r.dominant; })) {
        decision.reason = InconclusiveReason::NotDominant;
        decision.detail = "lowest sampled level does not carry more than theta of the shots";
    } else if (tail([&](const TimeRecord& r) { return r.level_energy != report.runs.back().level_energy; })) {
        decision.reason = InconclusiveReason::UnstableAcrossT;
        decision.detail = "identified level changes between the two largest evolution times";
    }
    if (decision.reason) {
        decision.kind = DecisionKind::Inconclusive;
        return report;
    }

    const TimeRecord& last = report.runs.back();
    const Eigen::VectorXd& diag = problem.h_problem.diagonal();
    report.identified = true;
    for (Eigen::Index j = 0; j < diag.size(); ++j) {
        if (diag[j] == last.level_energy) {
            report.ground_space.push_back(static_cast<std::size_t>(j));
            report.ground_tuples.push_back(problem.basis.tuple_of(static_cast<std::size_t>(j)));
        }
    }
    const BigInt energy(static_cast<std::uint64_t>(last.level_energy));
    report.min_energy_observed = energy;
    for (const auto& t : report.ground_tuples) {
        report.caveats.cutoff_limited |= std::find(t.begin(), t.end(), cfg.cutoff) != t.end();
    }

    if (energy == 0) {
        decision.kind = DecisionKind::HasSolution;
        for (auto index : last.dominant_indices) {
            EvaluationPoint w = problem.basis.tuple_of(index);
            if (evaluate(cfg.polynomial, w) != 0) {
                throw std::logic_error("witness failed exact substitution; identification is broken");
            }
            decision.witnesses.push_back(std::move(w));
        }
    } else {
        decision.kind = DecisionKind::NoSolutionWithinCutoff;
        decision.min_value = energy;
        decision.argmin = report.ground_tuples;
        report.caveats.cutoff_limited = true;
    }
    return report;
}

Decision decide(const RunConfig& cfg) {
    try {
        return identify_ground_state(cfg).decision;
    } catch (const GuardError& e) {
        Decision d;
        d.kind = DecisionKind::Inconclusive;
        d.reason = InconclusiveReason::GuardExceeded;
        d.detail = e.what();
        return d;
    }
}

// ---------------------------------------------------------------- JSON

namespace {

nlohmann::ordered_json big_to_json(const BigInt& v) {
    if (v >= 0 && v <= BigInt(std::numeric_limits<std::uint64_t>::max())) return v.convert_to<std::uint64_t>();
    return v.str();
}

nlohmann::ordered_json points_to_json(const std::vector<EvaluationPoint>& pts) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& p : pts) arr.push_back(p);
    return arr;
}

std::string profile_name(ScheduleProfile p) {
    return p == ScheduleProfile::Smoothstep ? "smoothstep" : "linear";
}

} // namespace

nlohmann::ordered_json to_json(const Decision& decision) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(decision.kind);
    switch (decision.kind) {
        case DecisionKind::HasSolution:
            j["witnesses"] = points_to_json(decision.witnesses);
            break;
        case DecisionKind::NoSolutionWithinCutoff:
            j["min_value"] = big_to_json(decision.min_value);
            j["argmin"] = points_to_json(decision.argmin);
            break;
        case DecisionKind::Inconclusive:
            j["reason"] = decision.reason ? to_string(*decision.reason) : "unknown";
            j["detail"] = decision.detail;
            break;
    }
    return j;
}

nlohmann::ordered_json to_json(const VerificationReport& report, const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["schema"] = "h10.verification-report/1";
    j["polynomial"] = cfg.polynomial.to_string();
    j["variables"] = cfg.polynomial.variables();
    j["cutoff"] = cfg.cutoff;

    nlohmann::ordered_json config;
    nlohmann::ordered_json alpha = nlohmann::ordered_json::array();
    for (const auto& a : cfg.resolved_alpha()) alpha.push_back({a.real(), a.imag()});
    config["alpha"] = std::move(alpha);
    config["times"] = cfg.times;
    config["steps_per_time"] = cfg.steps_per_time;
    config["profile"] = profile_name(cfg.profile);
    config["shots"] = cfg.shots;
    config["seed"] = cfg.seed;
    config["theta"] = cfg.theta;
    config["match_statistic"] = cfg.match.statistic == MatchStatistic::ChiSquare ? "chi-square" : "total-variation";
    config["match_c"] = cfg.match.c;
    config["support_floor"] = cfg.match.support_floor;
    j["config"] = std::move(config);

    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (const auto& r : report.runs) {
        nlohmann::ordered_json rj;
        rj["time"] = r.time;
        rj["steps"] = r.steps;
        rj["seed"] = r.seed;
        rj["calculated"] = r.calculated.probabilities();
        rj["measured"] = to_json(r.measured);
        rj["match"] = {{"statistic", r.match.statistic},
                       {"threshold", r.match.threshold},
                       {"support", r.match.support},
                       {"pass", r.match.pass}};
        rj["level_energy"] = std::isfinite(r.level_energy) ? nlohmann::ordered_json(r.level_energy) : nullptr;
        rj["dominant_indices"] = r.dominant_indices;
        rj["dominant_probability"] = r.dominant_probability;
        rj["dominant"] = r.dominant;
        rj["ground_population"] = r.ground_population;
        rj["norm_drift"] = r.norm_drift;
        runs.push_back(std::move(rj));
    }
    j["runs"] = std::move(runs);

    j["identified"] = report.identified;
    if (report.identified) {
        j["ground_space"] = {{"indices", report.ground_space}, {"tuples", points_to_json(report.ground_tuples)}};
    } else {
        j["ground_space"] = nullptr;
    }
    j["min_energy_observed"] = report.min_energy_observed ? big_to_json(*report.min_energy_observed) : nullptr;
    j["decision"] = to_json(report.decision);
    j["caveats"] = {{"cutoff_limited", report.caveats.cutoff_limited},
                    {"match_failed", report.caveats.match_failed},
                    {"not_dominant", report.caveats.not_dominant}};
    return j;
}

} // namespace h10
