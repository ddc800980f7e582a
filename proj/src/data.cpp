#include "pairelicit/data.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pairelicit/common.hpp"
#include "pairelicit/rng.hpp"

namespace pairelicit {

namespace {

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= line.size()) {
        std::size_t end = line.find(sep, start);
        if (end == std::string_view::npos) end = line.size();
        out.push_back(line.substr(start, end - start));
        start = end + 1;
        if (end == line.size()) break;
    }
    return out;
}

// Parses "idx:val" and appends it, enforcing 1-based strictly increasing
// indices and dropping explicit zeros.
void append_entry(FeatureVector& fv, std::string_view token, std::size_t line_no) {
    std::size_t colon = token.find(':');
    if (colon == std::string_view::npos)
        throw ParseError(line_no, "expected index:value, got '" + std::string(token) + "'");
    bool ok = false;
    double idx_real = parse_double(token.substr(0, colon), ok);
    if (!ok || idx_real != std::floor(idx_real) || idx_real < 1 || idx_real > 4294967295.0)
        throw ParseError(line_no, "bad feature index '" + std::string(token.substr(0, colon)) + "'");
    auto idx = static_cast<std::uint32_t>(idx_real);
    double val = parse_double(token.substr(colon + 1), ok);
    if (!ok) throw ParseError(line_no, "bad feature value '" + std::string(token.substr(colon + 1)) + "'");
    if (!fv.entries.empty() && idx <= fv.entries.back().first)
        throw ParseError(line_no, "feature indices must be strictly increasing");
    if (val != 0.0) fv.entries.emplace_back(idx, val);
}

void check_dim(std::uint32_t seen, std::optional<std::uint32_t> dim_override, std::size_t line_no) {
    if (dim_override && seen > *dim_override)
        throw ParseError(line_no, "feature index " + std::to_string(seen) + " exceeds declared dim " +
                                      std::to_string(*dim_override));
}

std::string serialize_vector(const FeatureVector& fv, char sep) {
    std::string out;
    for (const auto& [idx, val] : fv.entries) {
        out += sep;
        out += std::to_string(idx);
        out += ':';
        out += format_double(val);
    }
    return out;
}

}  // namespace

Dataset parse_libsvm(const std::string& text, std::optional<std::uint32_t> dim_override) {
    Dataset data;
    std::uint32_t max_idx = 0;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string token;
        if (!(ls >> token)) continue;
        bool ok = false;
        double label = parse_double(token, ok);
        if (!ok) throw ParseError(line_no, "bad label '" + token + "'");
        PointwiseSample s;
        s.y = label > 0 ? 1 : -1;
        while (ls >> token) append_entry(s.x, token, line_no);
        check_dim(s.x.max_index(), dim_override, line_no);
        max_idx = std::max(max_idx, s.x.max_index());
        data.samples.push_back(std::move(s));
    }
    data.dim = dim_override.value_or(max_idx);
    return data;
}

std::string serialize_libsvm(const Dataset& data) {
    std::string out;
    for (const auto& s : data.samples) {
        out += s.y > 0 ? "+1" : "-1";
        out += serialize_vector(s.x, ' ');
        out += '\n';
    }
    return out;
}

Dataset sample_gaussian(const GaussianMixtureSpec& spec, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Dataset data;
    data.dim = 1;
    data.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        PointwiseSample s;
        s.y = rng.bernoulli(spec.prior_pos) ? 1 : -1;
        double x = s.y > 0 ? rng.normal(spec.mu_pos, spec.sigma_pos)
                           : rng.normal(spec.mu_neg, spec.sigma_neg);
        if (x != 0.0) s.x.entries.emplace_back(1u, x);
        data.samples.push_back(std::move(s));
    }
    return data;
}

PairDataset make_pairs(const Dataset& data, std::size_t m, std::uint64_t seed) {
    if (data.samples.empty()) throw std::invalid_argument("make_pairs: empty dataset");
    Rng rng(seed);
    PairDataset pairs;
    pairs.dim = data.dim;
    pairs.samples.reserve(m);
    const auto n = static_cast<std::uint64_t>(data.samples.size());
    for (std::size_t k = 0; k < m; ++k) {
        auto i = static_cast<std::size_t>(rng.below(n));
        auto j = static_cast<std::size_t>(rng.below(n));
        pairs.samples.push_back(
            {data.samples[i].x, data.samples[j].x, data.samples[i].y * data.samples[j].y});
    }
    return pairs;
}

PairDataset make_all_ordered_pairs(const Dataset& data) {
    PairDataset pairs;
    pairs.dim = data.dim;
    pairs.samples.reserve(data.size() * data.size());
    for (const auto& a : data.samples)
        for (const auto& b : data.samples) pairs.samples.push_back({a.x, b.x, a.y * b.y});
    return pairs;
}

std::pair<PairDataset, PairDataset> split_pairs(const PairDataset& pairs, double ratio,
                                                std::uint64_t seed) {
    if (!(ratio > 0.0) || ratio > 1.0)
        throw std::invalid_argument("split_pairs: ratio must lie in (0, 1]");
    const std::size_t m = pairs.size();
    auto m1 = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(m)));
    m1 = std::min(m1, m);

    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    Rng rng(seed);
    for (std::size_t i = m; i > 1; --i)
        std::swap(perm[i - 1], perm[static_cast<std::size_t>(rng.below(i))]);

    PairDataset d1, d2;
    d1.dim = d2.dim = pairs.dim;
    d1.samples.reserve(m1);
    d2.samples.reserve(m - m1);
    for (std::size_t k = 0; k < m; ++k)
        (k < m1 ? d1 : d2).samples.push_back(pairs.samples[perm[k]]);
    return {std::move(d1), std::move(d2)};
}

std::string serialize_pairs_csv(const PairDataset& pairs) {
    std::string out = "tau,idx:val...,|,idx:val...\n";
    for (const auto& p : pairs.samples) {
        out += p.tau > 0 ? "+1" : "-1";
        out += serialize_vector(p.x, ',');
        out += ",|";
        out += serialize_vector(p.x_prime, ',');
        out += '\n';
    }
    return out;
}

PairDataset parse_pairs_csv(const std::string& text, std::optional<std::uint32_t> dim_override) {
    PairDataset pairs;
    std::uint32_t max_idx = 0;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (!saw_header) {
            if (line.rfind("tau,", 0) != 0) throw ParseError(line_no, "missing pair CSV header");
            saw_header = true;
            continue;
        }
        auto fields = split_fields(line, ',');
        if (fields.size() < 2) throw ParseError(line_no, "too few fields");
        PairwiseSample p;
        bool ok = false;
        double tau = parse_double(fields[0], ok);
        if (!ok || (tau != 1.0 && tau != -1.0))
            throw ParseError(line_no, "tau must be +1 or -1, got '" + std::string(fields[0]) + "'");
        p.tau = tau > 0 ? 1 : -1;
        bool past_sep = false;
        for (std::size_t f = 1; f < fields.size(); ++f) {
            if (fields[f] == "|") {
                if (past_sep) throw ParseError(line_no, "duplicate '|' separator");
                past_sep = true;
                continue;
            }
            append_entry(past_sep ? p.x_prime : p.x, fields[f], line_no);
        }
        if (!past_sep) throw ParseError(line_no, "missing '|' separator");
        check_dim(p.x.max_index(), dim_override, line_no);
        check_dim(p.x_prime.max_index(), dim_override, line_no);
        max_idx = std::max({max_idx, p.x.max_index(), p.x_prime.max_index()});
        pairs.samples.push_back(std::move(p));
    }
    if (!saw_header) throw ParseError(1, "missing pair CSV header");
    pairs.dim = dim_override.value_or(max_idx);
    return pairs;
}

double empirical_prior(const Dataset& data) {
    if (data.samples.empty()) throw std::invalid_argument("empirical_prior: empty dataset");
    std::size_t pos = 0;
    for (const auto& s : data.samples) pos += s.y > 0;
    return static_cast<double>(pos) / static_cast<double>(data.size());
}

}  // namespace pairelicit
