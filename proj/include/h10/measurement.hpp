#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "h10/evolution.hpp"

namespace h10 {

/// Probabilities over basis indices; entries >= 0, sum 1 within 1e-9.
class Distribution {
public:
    static constexpr double kSumTolerance = 1e-9;

    explicit Distribution(std::vector<double> probabilities);

    const std::vector<double>& probabilities() const noexcept { return p_; }
    std::size_t dimension() const noexcept { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }

private:
    std::vector<double> p_;
};

/// Outcome counts of repeated projective measurements in the number basis.
struct ShotRecord {
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::string generator;
    std::map<std::size_t, std::uint64_t> counts; // index -> count, zero counts omitted

    /// counts / shots as a distribution over `dimension` indices.
    Distribution empirical(std::size_t dimension) const;
};

/// Name recorded in every ShotRecord. Draws are the top 53 bits of each
/// std::mt19937_64 output scaled to [0,1), mapped through the cumulative
/// distribution by binary search.
inline constexpr const char* kGeneratorName = "mt19937_64/u53-inverse-cdf";

Distribution born_distribution(const WaveFunction& state);
Distribution born_distribution(const Eigen::VectorXcd& amplitudes);

ShotRecord sample(const Distribution& dist, std::uint64_t shots, std::uint64_t seed);
ShotRecord sample(const WaveFunction& state, std::uint64_t shots, std::uint64_t seed);

double total_variation(const Distribution& a, const Distribution& b);
double total_variation(const Distribution& calc, const ShotRecord& measured);

enum class MatchStatistic { TotalVariation, ChiSquare };

struct MatchOptions {
    MatchStatistic statistic = MatchStatistic::TotalVariation;
    double c = 2.0;
    double support_floor = 1e-6;
    std::uint64_t min_shots = 100;
};

struct MatchVerdict {
    double statistic = 0.0;
    double threshold = 0.0;
    std::size_t support = 0; // indices with calc > support_floor
    bool pass = false;
};

/// Total variation: pass iff TV(calc, measured/M) <= c sqrt(d/M).
/// Chi-square: Pearson statistic over the support plus one pooled bin for
/// everything below the floor; pass iff chi2 <= df + c sqrt(2 df).
MatchVerdict match_verdict(const Distribution& calc, const ShotRecord& measured,
                           const MatchOptions& options = {});

nlohmann::ordered_json to_json(const ShotRecord& record);
ShotRecord shot_record_from_json(const nlohmann::json& j);

} // namespace h10
