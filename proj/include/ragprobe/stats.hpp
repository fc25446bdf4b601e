#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ragprobe/common.hpp"

namespace ragprobe {

struct BootstrapSettings {
    int resamples = 5000;
    std::uint64_t seed = 42;
    double level = 0.95;

    void validate() const {
        if (resamples < 1) throw ConfigError("bootstrap resamples must be >= 1");
        if (!(level > 0 && level < 1)) throw ConfigError("bootstrap level must be in (0,1)");
    }
};

struct BootstrapResult {
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    size_t n = 0;
    int resamples = 5000;
    std::uint64_t seed = 42;
};

/// Paired original-minus-intervention delta with percentile CI and the
/// two-sided bootstrap p-value. min_side_fraction is the smaller of the
/// resampled-mean tail fractions; reports print "<0.001" when it drops
/// below 1e-3.
struct PairedDelta {
    double delta_mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double p_two_sided = 1.0;
    double min_side_fraction = 0.5;
    size_t n = 0;
};

struct SynergySummary {
    double mean_drop_s1 = 0.0;
    double mean_drop_s2 = 0.0;
    double mean_drop_both = 0.0;
    double mean_synergy_over_max = 0.0;
    double pct_positive_synergy = 0.0;      // percent of eligible examples
    double pct_strong_complementary = 0.0;  // percent of eligible examples
    size_t n_eligible = 0;
};

namespace detail {

inline double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// Linearly interpolated empirical quantile over a sorted vector.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.size() == 1) return sorted.front();
    const double h = q * static_cast<double>(sorted.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(h));
    const size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline std::vector<double> resampled_means(std::span<const double> values, int resamples,
                                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const size_t n = values.size();
    std::vector<double> means;
    means.reserve(static_cast<size_t>(resamples));
    for (int r = 0; r < resamples; ++r) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += values[bounded_uniform(rng, n)];
        means.push_back(s / static_cast<double>(n));
    }
    return means;
}

}  // namespace detail

/// Percentile bootstrap of a mean. Deterministic under a fixed seed.
inline BootstrapResult bootstrap_mean(std::span<const double> values, int resamples = 5000,
                                      std::uint64_t seed = 42, double level = 0.95) {
    if (values.empty()) throw DataError("bootstrap_mean: empty sample");
    auto means = detail::resampled_means(values, resamples, seed);
    std::sort(means.begin(), means.end());
    const double alpha = (1.0 - level) / 2.0;
    BootstrapResult out;
    out.mean = detail::mean_of(values);
    out.ci_low = detail::quantile_sorted(means, alpha);
    out.ci_high = detail::quantile_sorted(means, 1.0 - alpha);
    out.n = values.size();
    out.resamples = resamples;
    out.seed = seed;
    return out;
}

/// Bootstrap the mean of paired differences orig_i - pert_i (aligned by
/// position). p = 2 * min(P(mean* >= 0), P(mean* <= 0)), ties counted on
/// both sides, clamped to 1 — all-zero deltas therefore report exactly 1.
inline PairedDelta paired_bootstrap(std::span<const double> orig, std::span<const double> pert,
                                    int resamples = 5000, std::uint64_t seed = 42,
                                    double level = 0.95) {
    if (orig.size() != pert.size())
        throw DataError("paired_bootstrap: sample lengths differ (" +
                        std::to_string(orig.size()) + " vs " + std::to_string(pert.size()) +
                        ")");
    if (orig.empty()) throw DataError("paired_bootstrap: empty sample");

    std::vector<double> deltas(orig.size());
    for (size_t i = 0; i < orig.size(); ++i) deltas[i] = orig[i] - pert[i];

    auto means = detail::resampled_means(deltas, resamples, seed);
    size_t ge0 = 0, le0 = 0;
    for (double m : means) {
        if (m >= 0.0) ++ge0;
        if (m <= 0.0) ++le0;
    }
    std::sort(means.begin(), means.end());

    const double alpha = (1.0 - level) / 2.0;
    PairedDelta out;
    out.delta_mean = detail::mean_of(deltas);
    out.ci_low = detail::quantile_sorted(means, alpha);
    out.ci_high = detail::quantile_sorted(means, 1.0 - alpha);
    out.min_side_fraction = static_cast<double>(std::min(ge0, le0)) /
                            static_cast<double>(resamples);
    out.p_two_sided = std::min(1.0, 2.0 * out.min_side_fraction);
    out.n = orig.size();
    return out;
}

/// Aggregate a two-support ablation. Inputs are aligned per-example answer-F1
/// drops relative to the original run. Per example,
/// synergy = drop_both - max(drop_s1, drop_s2); strong complementarity means
/// both single removals are harmless (<= eps) while the joint removal is
/// harmful (> eps).
inline SynergySummary synergy_stats(std::span<const double> drops_s1,
                                    std::span<const double> drops_s2,
                                    std::span<const double> drops_both, double eps = 0.05) {
    if (drops_s1.size() != drops_s2.size() || drops_s1.size() != drops_both.size())
        throw DataError("synergy_stats: misaligned drop lists");
    if (drops_s1.empty()) throw DataError("synergy_stats: empty drop lists");

    SynergySummary out;
    out.n_eligible = drops_s1.size();
    out.mean_drop_s1 = detail::mean_of(drops_s1);
    out.mean_drop_s2 = detail::mean_of(drops_s2);
    out.mean_drop_both = detail::mean_of(drops_both);

    double synergy_sum = 0.0;
    size_t positive = 0, strong = 0;
    for (size_t i = 0; i < drops_s1.size(); ++i) {
        const double synergy = drops_both[i] - std::max(drops_s1[i], drops_s2[i]);
        synergy_sum += synergy;
        if (synergy > 0.0) ++positive;
        if (drops_s1[i] <= eps && drops_s2[i] <= eps && drops_both[i] > eps) ++strong;
    }
    const double n = static_cast<double>(out.n_eligible);
    out.mean_synergy_over_max = synergy_sum / n;
    out.pct_positive_synergy = 100.0 * static_cast<double>(positive) / n;
    out.pct_strong_complementary = 100.0 * static_cast<double>(strong) / n;
    return out;
}

}  // namespace ragprobe
