#include "h10/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "h10/error.hpp"

namespace h10 {

Distribution::Distribution(std::vector<double> probabilities) : p_(std::move(probabilities)) {
    if (p_.empty()) throw DimensionError("distribution must have at least one entry");
    double sum = 0.0;
    for (double v : p_) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw NumericError("probabilities must be finite and non-negative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw NumericError("probabilities sum to " + std::to_string(sum) + ", not 1");
    }
}

Distribution ShotRecord::empirical(std::size_t dimension) const {
    if (shots == 0) throw ConfigError("shot record is empty");
    std::vector<double> p(dimension, 0.0);
    for (const auto& [index, count] : counts) {
        if (index >= dimension) throw DimensionError("shot index outside the basis");
        p[index] = static_cast<double>(count) / static_cast<double>(shots);
    }
    return Distribution(std::move(p));
}

Distribution born_distribution(const Eigen::VectorXcd& amplitudes) {
    std::vector<double> p(static_cast<std::size_t>(amplitudes.size()));
    for (Eigen::Index j = 0; j < amplitudes.size(); ++j) p[static_cast<std::size_t>(j)] = std::norm(amplitudes[j]);
    return Distribution(std::move(p));
}

Distribution born_distribution(const WaveFunction& state) { return born_distribution(state.amplitudes()); }

ShotRecord sample(const Distribution& dist, std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) throw ConfigError("need at least one shot");
    std::vector<double> cdf(dist.dimension());
    std::partial_sum(dist.probabilities().begin(), dist.probabilities().end(), cdf.begin());
    // Index of the last state with nonzero mass; draws past the rounded total land there.
    std::size_t last = dist.dimension() - 1;
    while (last > 0 && dist[last] == 0.0) --last;
    const double total = cdf.back();

    std::mt19937_64 engine(seed);
    ShotRecord record;
    record.shots = shots;
    record.seed = seed;
    record.generator = kGeneratorName;
    for (std::uint64_t i = 0; i < shots; ++i) {
        const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53 * total;
        auto idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        ++record.counts[std::min(idx, last)];
    }
    return record;
}

ShotRecord sample(const WaveFunction& state, std::uint64_t shots, std::uint64_t seed) {
    return sample(born_distribution(state), shots, seed);
}

double total_variation(const Distribution& a, const Distribution& b) {
    if (a.dimension() != b.dimension()) throw DimensionError("distributions have different dimensions");
    double sum = 0.0;
    for (std::size_t j = 0; j < a.dimension(); ++j) sum += std::abs(a[j] - b[j]);
    return std::min(1.0, 0.5 * sum);
}

double total_variation(const Distribution& calc, const ShotRecord& measured) {
    return total_variation(calc, measured.empirical(calc.dimension()));
}

MatchVerdict match_verdict(const Distribution& calc, const ShotRecord& measured, const MatchOptions& options) {
    if (measured.shots < options.min_shots) {
        throw ConfigError("match needs at least " + std::to_string(options.min_shots) + " shots, got " +
                          std::to_string(measured.shots));
    }
    const Distribution observed = measured.empirical(calc.dimension());
    MatchVerdict v;
    for (double p : calc.probabilities()) v.support += p > options.support_floor ? 1 : 0;
    const double m = static_cast<double>(measured.shots);

    switch (options.statistic) {
        case MatchStatistic::TotalVariation:
            v.statistic = total_variation(calc, observed);
            v.threshold = options.c * std::sqrt(static_cast<double>(v.support) / m);
            break;
        case MatchStatistic::ChiSquare: {
            double chi2 = 0.0;
            double pooled_expected = 0.0;
            double pooled_observed = 0.0;
            std::size_t bins = 0;
            for (std::size_t j = 0; j < calc.dimension(); ++j) {
                if (calc[j] > options.support_floor) {
                    const double e = calc[j] * m;
                    const double o = observed[j] * m;
                    chi2 += (o - e) * (o - e) / e;
                    ++bins;
                } else {
                    pooled_expected += calc[j] * m;
                    pooled_observed += observed[j] * m;
                }
            }
            if (pooled_expected > 0.0) {
                chi2 += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) / pooled_expected;
                ++bins;
            } else if (pooled_observed > 0.0) {
                chi2 = std::numeric_limits<double>::infinity();
            }
            const double df = std::max<double>(1.0, static_cast<double>(bins) - 1.0);
            v.statistic = chi2;
            v.threshold = df + options.c * std::sqrt(2.0 * df);
            break;
        }
    }
    v.pass = v.statistic <= v.threshold;
    return v;
}

nlohmann::ordered_json to_json(const ShotRecord& record) {
    nlohmann::ordered_json counts = nlohmann::ordered_json::object();
    for (const auto& [index, count] : record.counts) counts[std::to_string(index)] = count;
    nlohmann::ordered_json j;
    j["shots"] = record.shots;
    j["seed"] = record.seed;
    j["generator"] = record.generator;
    j["counts"] = std::move(counts);
    return j;
}

ShotRecord shot_record_from_json(const nlohmann::json& j) {
    ShotRecord r;
    r.shots = j.at("shots").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.generator = j.at("generator").get<std::string>();
    std::uint64_t total = 0;
    for (const auto& [key, value] : j.at("counts").items()) {
        const auto count = value.get<std::uint64_t>();
        r.counts[std::stoul(key)] = count;
        total += count;
    }
    if (total != r.shots) throw ConfigError("shot counts do not sum to the shot total");
    return r;
}

} // namespace h10
