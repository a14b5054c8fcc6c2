#include "h10/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "h10/diophantine.hpp"
#include "h10/error.hpp"
#include "h10/evolution.hpp"
#include "h10/fock.hpp"
#include "h10/measurement.hpp"
#include "h10/verification.hpp"

namespace h10::cli {

namespace {

struct Options {
    std::string equation;
    std::string file;
    std::uint64_t cutoff = 2;
    double tmax = 128.0;
    double evolve_time = 100.0;
    double steps_per_time = 40.0;
    std::uint64_t shots = 100'000;
    std::uint64_t seed = 42;
    double theta = 0.5;
    double match_c = 2.0;
    std::string statistic = "tv";
    std::vector<double> alpha;
    std::string profile = "linear";
    unsigned threads = 1;
    std::string out;
    std::string format;
    std::size_t grid = 101;
    std::string levels;
    std::size_t stride = 0;
    std::uint64_t max_points = kDefaultSearchGuard;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string tuple_text(const Occupation& t) {
    std::string s;
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? " " : "") + std::to_string(t[i]);
    return s;
}

std::string timestamp_utc() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Polynomial load_polynomial(const Options& o) {
    if (!o.equation.empty() && !o.file.empty()) throw ConfigError("give the equation either inline or with --file, not both");
    if (!o.file.empty()) {
        std::ifstream in(o.file);
        if (!in) throw ConfigError("cannot read " + o.file);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_polynomial(ss.str());
    }
    if (o.equation.empty()) throw ConfigError("no equation given");
    return parse_polynomial(o.equation);
}

std::vector<Complex> alpha_for(const Options& o, std::size_t modes) {
    if (o.alpha.empty()) return std::vector<Complex>(modes, Complex(1.0, 0.0));
    if (o.alpha.size() == 1) return std::vector<Complex>(modes, Complex(o.alpha[0], 0.0));
    if (o.alpha.size() != modes) throw ConfigError("--alpha takes one value or one per variable");
    std::vector<Complex> out;
    for (double a : o.alpha) out.emplace_back(a, 0.0);
    return out;
}

ScheduleProfile profile_for(const Options& o) {
    return o.profile == "smoothstep" ? ScheduleProfile::Smoothstep : ScheduleProfile::Linear;
}

/// Writes to --out when given, otherwise to `out`.
void emit(const Options& o, std::ostream& out, const std::string& text) {
    if (o.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + o.out);
    f << text;
}

void warn_truncation(const FockBasis& basis, const std::vector<Complex>& alpha, std::ostream& err) {
    for (auto mode : poorly_truncated_modes(basis, alpha)) {
        err << "warning: |alpha|^2 for mode " << mode << " exceeds cutoff/2; the truncated ground state of H_I is distorted\n";
    }
}

// ---------------------------------------------------------------- solve

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
    RunConfig cfg(load_polynomial(o));
    cfg.cutoff = o.cutoff;
    cfg.alpha = alpha_for(o, cfg.polynomial.arity());
    cfg.times = doubling_times(o.tmax);
    cfg.steps_per_time = o.steps_per_time;
    cfg.profile = profile_for(o);
    cfg.shots = o.shots;
    cfg.seed = o.seed;
    cfg.theta = o.theta;
    cfg.match.c = o.match_c;
    cfg.match.statistic = o.statistic == "chi2" ? MatchStatistic::ChiSquare : MatchStatistic::TotalVariation;
    cfg.threads = o.threads;
    cfg.validate();

    VerificationReport report;
    try {
        const FockBasis basis(cfg.polynomial.arity(), cfg.cutoff, cfg.dimension_guard);
        warn_truncation(basis, cfg.alpha, err);
        report = identify_ground_state(cfg);
    } catch (const GuardError& e) {
        report = VerificationReport{};
        report.decision.kind = DecisionKind::Inconclusive;
        report.decision.reason = InconclusiveReason::GuardExceeded;
        report.decision.detail = e.what();
    }

    if (o.format == "csv") {
        std::ostringstream os;
        os << "time,steps,seed,match_statistic,match_threshold,match_pass,level_energy,dominant_probability,ground_population\n";
        for (const auto& r : report.runs) {
            os << num(r.time) << ',' << r.steps << ',' << r.seed << ',' << num(r.match.statistic) << ','
               << num(r.match.threshold) << ',' << (r.match.pass ? 1 : 0) << ',' << num(r.level_energy) << ','
               << num(r.dominant_probability) << ',' << num(r.ground_population) << '\n';
        }
        emit(o, out, os.str());
    } else {
        auto j = to_json(report, cfg);
        j[kTimestampKey] = timestamp_utc();
        emit(o, out, j.dump(2) + "\n");
    }

    err << to_string(report.decision.kind);
    if (report.decision.reason) err << " (" << to_string(*report.decision.reason) << ")";
    err << '\n';
    return report.decision.kind == DecisionKind::Inconclusive ? kInconclusive : kOk;
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const Options& o, std::ostream& out, std::ostream& err) {
    const Polynomial p = load_polynomial(o);
    const FockBasis basis(p.arity(), o.cutoff);
    const auto alpha = alpha_for(o, p.arity());
    warn_truncation(basis, alpha, err);
    const Operator hp = build_problem_hamiltonian(p, basis);
    if (o.grid < 2) throw ConfigError("--grid needs at least 2 points");

    nlohmann::ordered_json levels_json = nlohmann::ordered_json::array();
    std::ostringstream levels_csv;
    const bool want_levels = !o.levels.empty() || o.format == "json";
    if (want_levels) {
        const Operator hi = build_initial_hamiltonian(basis, alpha);
        levels_csv << "s,level,energy\n";
        for (std::size_t g = 0; g < o.grid; ++g) {
            const double s = static_cast<double>(g) / static_cast<double>(o.grid - 1);
            const auto spec = spectral_decomposition(interpolate(hi, hp, s));
            std::vector<double> values(spec.eigenvalues.data(), spec.eigenvalues.data() + spec.eigenvalues.size());
            for (std::size_t l = 0; l < values.size(); ++l) levels_csv << num(s) << ',' << l << ',' << num(values[l]) << '\n';
            levels_json.push_back({{"s", s}, {"eigenvalues", values}});
        }
    }

    if (o.format == "json") {
        nlohmann::ordered_json j;
        j["polynomial"] = p.to_string();
        j["cutoff"] = o.cutoff;
        nlohmann::ordered_json diag = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < basis.dimension(); ++i) {
            diag.push_back({{"index", i}, {"tuple", basis.tuple_of(i)}, {"energy", hp.diagonal()[static_cast<Eigen::Index>(i)]}});
        }
        j["diagonal"] = std::move(diag);
        j["levels"] = std::move(levels_json);
        emit(o, out, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "index,tuple,energy\n";
        for (std::size_t i = 0; i < basis.dimension(); ++i) {
            os << i << ',' << tuple_text(basis.tuple_of(i)) << ',' << num(hp.diagonal()[static_cast<Eigen::Index>(i)]) << '\n';
        }
        emit(o, out, os.str());
        if (!o.levels.empty()) {
            std::ofstream f(o.levels, std::ios::binary);
            if (!f) throw ConfigError("cannot write " + o.levels);
            f << levels_csv.str();
        }
    }
    return kOk;
}

// ---------------------------------------------------------------- evolve

int cmd_evolve(const Options& o, std::ostream& out, std::ostream& err) {
    const Polynomial p = load_polynomial(o);
    const FockBasis basis(p.arity(), o.cutoff);
    const auto alpha = alpha_for(o, p.arity());
    warn_truncation(basis, alpha, err);
    const Operator hi = build_initial_hamiltonian(basis, alpha);
    const Operator hp = build_problem_hamiltonian(p, basis);
    if (!(o.steps_per_time > 0.0)) throw ConfigError("--steps-per-time must be positive");

    Schedule schedule;
    schedule.total_time = o.evolve_time;
    schedule.steps = static_cast<std::size_t>(std::max(1.0, std::ceil(o.evolve_time * o.steps_per_time - 1e-9)));
    schedule.profile = profile_for(o);
    EvolveOptions opts;
    opts.checkpoint_stride = o.stride;
    const Trajectory traj = evolve(ground_state(hi), hi, hp, schedule, opts);

    if (o.format == "json") {
        nlohmann::ordered_json j;
        j["polynomial"] = p.to_string();
        j["cutoff"] = o.cutoff;
        j["total_time"] = schedule.total_time;
        j["steps"] = schedule.steps;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& c : traj.checkpoints) {
            rows.push_back({{"s", c.s}, {"ground_population", *c.ground_population}, {"energy_expectation", c.energy}, {"norm", c.norm}});
        }
        j["checkpoints"] = std::move(rows);
        j["final_distribution"] = born_distribution(traj.final_amplitudes).probabilities();
        emit(o, out, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "s,ground_population,energy_expectation,norm\n";
        for (const auto& c : traj.checkpoints) {
            os << num(c.s) << ',' << num(*c.ground_population) << ',' << num(c.energy) << ',' << num(c.norm) << '\n';
        }
        emit(o, out, os.str());
    }
    return kOk;
}

// ---------------------------------------------------------------- oracle

int cmd_oracle(const Options& o, std::ostream& out, std::ostream&) {
    const Polynomial p = load_polynomial(o);
    const BruteForceResult r = brute_force_minimum(p, o.cutoff, o.max_points);
    nlohmann::ordered_json j;
    j["polynomial"] = p.to_string();
    j["variables"] = p.variables();
    j["bound"] = r.bound;
    j["min_value"] = r.min_value <= BigInt(std::numeric_limits<std::uint64_t>::max())
                         ? nlohmann::ordered_json(r.min_value.convert_to<std::uint64_t>())
                         : nlohmann::ordered_json(r.min_value.str());
    j["argmin"] = r.argmin;
    emit(o, out, j.dump(2) + "\n");
    return kOk;
}

void add_equation(CLI::App* sub, Options& o) {
    sub->add_option("equation", o.equation, "Polynomial, e.g. \"x^2 + y^2 - 25\"");
    sub->add_option("--file", o.file, "Read the polynomial from a file");
    sub->add_option("--cutoff", o.cutoff, "Maximum occupation per mode (box bound for oracle)")->capture_default_str();
    sub->add_option("--out", o.out, "Output path (default: standard output)");
}

void add_alpha(CLI::App* sub, Options& o) {
    sub->add_option("--alpha", o.alpha, "Coherent displacement of H_I: one value or one per variable (default 1)");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adiabatic ground-state simulator for Diophantine polynomials", "h10"};
    app.require_subcommand(1);
    Options o;

    auto* solve = app.add_subcommand("solve", "Decide solvability within the cutoff box and write a JSON report");
    add_equation(solve, o);
    add_alpha(solve, o);
    solve->add_option("--tmax", o.tmax, "Largest evolution time of the doubling sweep")->capture_default_str();
    solve->add_option("--steps-per-time", o.steps_per_time, "Integrator steps per unit time")->capture_default_str();
    solve->add_option("--shots", o.shots, "Measurement shots per evolution time")->capture_default_str();
    solve->add_option("--seed", o.seed, "Base RNG seed")->capture_default_str();
    solve->add_option("--theta", o.theta, "Dominance threshold")->capture_default_str();
    solve->add_option("--match-c", o.match_c, "Match threshold constant c")->capture_default_str();
    solve->add_option("--statistic", o.statistic, "Match statistic")->check(CLI::IsMember({"tv", "chi2"}))->capture_default_str();
    solve->add_option("--profile", o.profile, "Schedule profile")->check(CLI::IsMember({"linear", "smoothstep"}))->capture_default_str();
    solve->add_option("--threads", o.threads, "Worker threads for the sweep (0 = all cores)")->capture_default_str();
    solve->add_option("--format", o.format, "json or csv (per-time summary)")->check(CLI::IsMember({"json", "csv"}));

    auto* spectrum = app.add_subcommand("spectrum", "Dump the H_P diagonal and the spectrum of H(s) on an s-grid");
    add_equation(spectrum, o);
    add_alpha(spectrum, o);
    spectrum->add_option("--grid", o.grid, "Number of s points")->capture_default_str();
    spectrum->add_option("--levels", o.levels, "CSV file for the H(s) eigenvalues (s,level,energy)");
    spectrum->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"json", "csv"}));

    auto* evolve_cmd = app.add_subcommand("evolve", "Integrate one adiabatic run and write the trajectory");
    add_equation(evolve_cmd, o);
    add_alpha(evolve_cmd, o);
    evolve_cmd->add_option("--tmax", o.evolve_time, "Evolution time T")->capture_default_str();
    evolve_cmd->add_option("--steps-per-time", o.steps_per_time, "Integrator steps per unit time")->capture_default_str();
    evolve_cmd->add_option("--profile", o.profile, "Schedule profile")->check(CLI::IsMember({"linear", "smoothstep"}))->capture_default_str();
    evolve_cmd->add_option("--stride", o.stride, "Steps between checkpoints (default steps/100)");
    evolve_cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"json", "csv"}));

    auto* oracle = app.add_subcommand("oracle", "Brute-force minimum of D^2 over [0,cutoff]^k");
    add_equation(oracle, o);
    oracle->add_option("--max-points", o.max_points, "Search-space guard")->capture_default_str();
    oracle->add_option("--format", o.format, "json")->check(CLI::IsMember({"json"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kError;
    }

    try {
        if (*solve) return cmd_solve(o, out, err);
        if (*spectrum) return cmd_spectrum(o, out, err);
        if (*evolve_cmd) return cmd_evolve(o, out, err);
        if (*oracle) return cmd_oracle(o, out, err);
    } catch (const ParseError& e) {
        err << "error: syntax error: " << e.what() << '\n';
        return kError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
    return kError;
}

} // namespace h10::cli
