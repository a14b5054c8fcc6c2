// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "h10/cli.hpp"
#include "h10/verification.hpp"
#include "test_support.hpp"

using namespace h10;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(const char* id, const char* title, double limit_s, const std::function<Outcome()>& body) {
    const auto start = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (limit_s > 0 && secs >= limit_s) {
        o.pass = false;
        o.detail += " (over time limit)";
    }
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << id << ' ' << title << ": " << o.detail << " [" << timing << "]"
              << std::endl;
    if (!o.pass) ++failures;
}

std::vector<EvaluationPoint> level_tuples(const FockBasis& basis, const Eigen::VectorXd& diag, double level) {
    std::vector<EvaluationPoint> out;
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        if (diag[i] == level) {
            const auto t = basis.tuple_of(static_cast<std::size_t>(i));
            out.emplace_back(t.begin(), t.end());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct StandardInstance {
    FockBasis basis = build_basis(2, 2);
    Operator hi = build_initial_hamiltonian(basis, {1.0, 1.0});
    Operator hp = build_problem_hamiltonian(parse_polynomial("x + y - 2"), basis);
    WaveFunction start = ground_state(hi);

    Eigen::VectorXcd run(double T, std::size_t M) const {
        EvolveOptions o;
        o.track_ground_population = false;
        return evolve(start, hi, hp, Schedule{T, M}, o).final_amplitudes;
    }
    double zero_level_population(const Eigen::VectorXcd& psi) const {
        double p = 0.0;
        for (Eigen::Index j = 0; j < psi.size(); ++j) p += hp.diagonal()[j] == 0.0 ? std::norm(psi[j]) : 0.0;
        return p;
    }
};

std::string strip_timestamp(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    const std::string key = std::string("\"") + cli::kTimestampKey + "\"";
    while (std::getline(in, line)) {
        if (line.find(key) != std::string::npos) continue;
        out += line + '\n';
    }
    return out;
}

} // namespace

int main() {
    const auto corpus = test::load_corpus();
    std::vector<VerificationReport> reports;

    report("AC1", "spectral minimum equals the exhaustive oracle", 10.0, [&] {
        std::size_t mismatches = 0;
        for (const auto& e : corpus) {
            const Polynomial p = parse_polynomial(e.text);
            const auto basis = build_basis(p.arity(), e.cutoff);
            const Operator hp = build_problem_hamiltonian(p, basis);
            const auto spec = spectral_decomposition(hp);
            const double min_diag = hp.diagonal().minCoeff();
            const auto oracle = brute_force_minimum(p, e.cutoff);
            const bool ok = min_diag == oracle.min_value.convert_to<double>() && spec.eigenvalues[0] == min_diag &&
                            level_tuples(basis, hp.diagonal(), min_diag) == oracle.argmin;
            if (!ok) {
                ++mismatches;
                std::cout << "  mismatch: " << e.text << " N=" << e.cutoff << '\n';
            }
        }
        return Outcome{mismatches == 0, std::to_string(corpus.size()) + " instances, " + std::to_string(mismatches) +
                                            " mismatches"};
    });

    report("AC2", "decisions agree with the oracle, >= 80% conclusive", 600.0, [&] {
        std::size_t conclusive = 0, disagreements = 0;
        for (const auto& e : corpus) {
            const Polynomial p = parse_polynomial(e.text);
            RunConfig cfg(p);
            cfg.cutoff = e.cutoff;
            reports.push_back(identify_ground_state(cfg));
            const auto& d = reports.back().decision;
            const auto oracle = brute_force_minimum(p, e.cutoff);
            bool agree = true;
            if (d.kind == DecisionKind::HasSolution) {
                agree = oracle.min_value == 0 && reports.back().ground_tuples.size() == oracle.argmin.size();
                for (const auto& w : d.witnesses)
                    agree &= std::find(oracle.argmin.begin(), oracle.argmin.end(), w) != oracle.argmin.end();
            } else if (d.kind == DecisionKind::NoSolutionWithinCutoff) {
                agree = oracle.min_value > 0 && d.min_value == oracle.min_value && d.argmin == oracle.argmin;
            }
            if (d.kind != DecisionKind::Inconclusive) ++conclusive;
            if (!agree) ++disagreements;
            std::cout << "  " << e.text << " N=" << e.cutoff << ": " << to_string(d.kind)
                      << (d.reason ? " (" + to_string(*d.reason) + ")" : "") << (agree ? "" : "  DISAGREES") << '\n';
        }
        const double share = static_cast<double>(conclusive) / static_cast<double>(corpus.size());
        return Outcome{disagreements == 0 && share >= 0.8,
                       std::to_string(conclusive) + "/" + std::to_string(corpus.size()) + " conclusive, " +
                           std::to_string(disagreements) + " disagreements"};
    });

    report("AC3", "every witness is an exact zero", 0, [&] {
        std::size_t checked = 0, bad = 0;
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const Polynomial p = parse_polynomial(corpus[i].text);
            for (const auto& w : reports[i].decision.witnesses) {
                ++checked;
                bad += evaluate(p, w) == 0 ? 0 : 1;
            }
        }
        return Outcome{bad == 0 && checked > 0, std::to_string(checked) + " witnesses, " + std::to_string(bad) + " invalid"};
    });

    report("AC4", "cumulative norm drift <= 1e-9 on every corpus evolution", 0, [&] {
        double worst = 0.0;
        std::size_t runs = 0;
        for (const auto& r : reports) {
            for (const auto& t : r.runs) {
                worst = std::max(worst, t.norm_drift);
                ++runs;
            }
        }
        char buf[96];
        std::snprintf(buf, sizeof buf, "%zu evolutions, worst drift %.3e", runs, worst);
        return Outcome{runs > 0 && worst <= 1e-9, buf};
    });

    report("AC5", "adiabatic trend on x + y - 2, N = 2", 60.0, [&] {
        const StandardInstance inst;
        std::vector<double> pops;
        for (double T : {1.0, 10.0, 100.0}) pops.push_back(inst.zero_level_population(inst.run(T, static_cast<std::size_t>(40 * T))));
        const double reference = inst.zero_level_population(inst.run(100.0, 4 * 4000));
        const bool trend = pops[1] + 0.02 >= pops[0] && pops[2] + 0.02 >= pops[1];
        const bool high = pops[2] >= 0.9 && reference >= 0.9 && std::abs(pops[2] - reference) < 1e-3;
        char buf[160];
        std::snprintf(buf, sizeof buf, "populations %.4f, %.4f, %.6f; 4x-refined reference %.6f", pops[0], pops[1], pops[2],
                      reference);
        return Outcome{trend && high, buf};
    });

    report("AC6", "step-halving error ratio in [3, 5]", 0, [&] {
        const StandardInstance inst;
        bool ok = true;
        std::string detail;
        for (double T : {10.0, 100.0}) {
            const std::size_t M = static_cast<std::size_t>(40 * T);
            const Eigen::VectorXcd reference = inst.run(T, 4 * M);
            const double ratio = (inst.run(T, M) - reference).norm() / (inst.run(T, 2 * M) - reference).norm();
            ok &= ratio >= 3.0 && ratio <= 5.0;
            char buf[64];
            std::snprintf(buf, sizeof buf, "%sT=%g ratio %.4f", detail.empty() ? "" : ", ", T, ratio);
            detail += buf;
        }
        return Outcome{ok, detail};
    });

    report("AC7", "match verdict calibration over 100 seeds", 60.0, [&] {
        const Distribution calc({0.05, 0.1, 0.15, 0.2, 0.5});
        // Move 0.3 of mass from the heaviest entry onto the lightest.
        const Distribution far({0.35, 0.1, 0.15, 0.2, 0.2});
        if (std::abs(total_variation(calc, far) - 0.3) > 1e-12) return Outcome{false, "bad fixture"};
        int pass_true = 0, fail_far = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            pass_true += match_verdict(calc, sample(calc, 100'000, seed)).pass ? 1 : 0;
            fail_far += match_verdict(calc, sample(far, 100'000, 1000 + seed)).pass ? 0 : 1;
        }
        return Outcome{pass_true >= 99 && fail_far >= 99, "true distribution passes " + std::to_string(pass_true) +
                                                              "/100, TV 0.3 fails " + std::to_string(fail_far) + "/100"};
    });

    report("AC8", "solve reports are byte-identical except the timestamp", 0, [&] {
        const std::vector<std::string> args{"solve", "x^2 + y^2 - 25", "--cutoff", "5", "--seed", "42"};
        std::ostringstream out1, out2, err1, err2;
        const int c1 = cli::run(args, out1, err1);
        const int c2 = cli::run(args, out2, err2);
        const bool has_stamp = out1.str().find(cli::kTimestampKey) != std::string::npos;
        const bool same = strip_timestamp(out1.str()) == strip_timestamp(out2.str());
        return Outcome{c1 == c2 && c1 != cli::kError && has_stamp && same,
                       std::to_string(out1.str().size()) + " bytes, " + (same ? "identical" : "differ")};
    });

    std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
