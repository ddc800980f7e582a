#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pairelicit/errors.hpp"

namespace pairelicit {

// Sparse feature vector. Indices are 1-based, strictly increasing, and only
// nonzero values are stored.
struct FeatureVector {
    std::vector<std::pair<std::uint32_t, double>> entries;

    std::uint32_t max_index() const { return entries.empty() ? 0 : entries.back().first; }
    bool operator==(const FeatureVector&) const = default;
};

struct PointwiseSample {
    FeatureVector x;
    int y;  // +1 or -1
};

// A pair of instances plus the similar/dissimilar signal tau = y * y'.
// The pointwise labels themselves are never stored here.
struct PairwiseSample {
    FeatureVector x;
    FeatureVector x_prime;
    int tau;  // +1 or -1
};

struct Dataset {
    std::vector<PointwiseSample> samples;
    std::uint32_t dim = 0;

    std::size_t size() const { return samples.size(); }
};

struct PairDataset {
    std::vector<PairwiseSample> samples;
    std::uint32_t dim = 0;

    std::size_t size() const { return samples.size(); }
};

// Two-component 1-D Gaussian mixture: x | y=+1 ~ N(mu_pos, sigma_pos^2),
// x | y=-1 ~ N(mu_neg, sigma_neg^2), P(y=+1) = prior_pos.
struct GaussianMixtureSpec {
    double mu_pos = 1.0;
    double sigma_pos = 1.0;
    double mu_neg = -1.0;
    double sigma_neg = 2.0;
    double prior_pos = 0.1;
};

// --- LIBSVM text format ---
//
// One sample per line: "<label> <index>:<value> ...". Any positive label maps
// to +1, everything else to -1. Indices must be 1-based and strictly
// increasing within a line; zero values are dropped. dim is the largest index
// seen unless dim_override is given (an index above the override is an error).
// Errors carry the 1-based line number.
Dataset parse_libsvm(const std::string& text, std::optional<std::uint32_t> dim_override = {});
std::string serialize_libsvm(const Dataset& data);

// n labeled draws from the mixture. Per sample the generator is consumed in a
// fixed order (label first, then the normal variate), so runs replay exactly.
Dataset sample_gaussian(const GaussianMixtureSpec& spec, std::size_t n, std::uint64_t seed);

// m pairs drawn with replacement: two independent uniform indices per pair
// (self-pairs allowed), tau = product of the source labels.
PairDataset make_pairs(const Dataset& data, std::size_t m, std::uint64_t seed);

// All n^2 ordered pairs in row-major order (i outer, j inner). This is the
// exact empirical pair distribution used by the identity checks.
PairDataset make_all_ordered_pairs(const Dataset& data);

// Random disjoint split for the two training stages. |first| = round(ratio*m),
// ratio in (0, 1]; the union preserves the input multiset.
std::pair<PairDataset, PairDataset> split_pairs(const PairDataset& pairs, double ratio,
                                                std::uint64_t seed);

// --- pair CSV format ---
//
// Header line "tau,idx:val...,|,idx:val..." followed by one row per pair:
// the tau sign, the entries of x as idx:val fields, a lone "|" separator
// field, then the entries of x'. Example: "-1,1:0.5,3:2,|,1:-1".
std::string serialize_pairs_csv(const PairDataset& pairs);
PairDataset parse_pairs_csv(const std::string& text, std::optional<std::uint32_t> dim_override = {});

// Fraction of +1 labels; errors on an empty dataset.
double empirical_prior(const Dataset& data);

}  // namespace pairelicit
