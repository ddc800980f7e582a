#include "pairelicit/train.hpp"

#include <cmath>

#include "pairelicit/rng.hpp"

namespace pairelicit {

namespace {

constexpr std::size_t kPowerIterationCap = 100000;
// The stop test compares successive iterates, which undershoots the remaining
// angle to the true eigenvector by the spectral-gap factor, and the shift
// compresses that gap; the deficit threshold therefore sits well below the
// 1e-8 cosine accuracy the solver has to deliver.
constexpr double kPowerIterationTol = 1e-13;
constexpr std::size_t kScatterDimCap = 10000;

bool needs_symmetry_breaking(ObjectiveKind kind) {
    return kind == ObjectiveKind::cips || kind == ObjectiveKind::mcl;
}

LinearModel initial_model(const TrainConfig& config, std::size_t dim) {
    LinearModel model;
    model.weights.assign(dim, 0.0);
    if (needs_symmetry_breaking(config.objective.kind)) {
        Rng rng(config.seed);
        for (double& w : model.weights) w = rng.uniform(-1e-2, 1e-2);
    }
    return model;
}

std::vector<std::size_t> identity_permutation(std::size_t n) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    return perm;
}

void shuffle(std::vector<std::size_t>& perm, Rng& rng) {
    for (std::size_t i = perm.size(); i > 1; --i)
        std::swap(perm[i - 1], perm[static_cast<std::size_t>(rng.below(i))]);
}

double penalty(const LinearModel& model, double l2) {
    double sq = 0.0;
    for (double w : model.weights) sq += w * w;
    return 0.5 * l2 * sq;
}

// One SGD pass shared by the pair and point overloads. `gradient` fills the
// batch-mean gradient, `objective` evaluates the full-data risk.
template <typename GradientFn, typename ObjectiveFn>
TrainResult run_sgd(const TrainConfig& config, std::size_t n, std::size_t dim,
                    GradientFn&& gradient, ObjectiveFn&& objective) {
    if (n == 0) throw std::invalid_argument("train_sgd: empty training set");
    if (config.batch_size == 0) throw std::invalid_argument("train_sgd: batch_size must be positive");
    if (!(config.learning_rate > 0)) throw std::invalid_argument("train_sgd: learning_rate must be positive");
    if (config.l2 < 0) throw std::invalid_argument("train_sgd: l2 must be nonnegative");

    TrainResult result;
    result.model = initial_model(config, dim);
    Rng rng(config.seed ^ 0x5b7a0e8d2c3f4615ULL);  // distinct stream from the init draw

    auto record = [&](std::size_t epoch) {
        double value = objective(result.model) + penalty(result.model, config.l2);
        if (!std::isfinite(value))
            throw DivergenceError(epoch, "training objective is not finite");
        result.trace.push_back(value);
    };
    record(0);

    auto perm = identity_permutation(n);
    Gradient grad;
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        shuffle(perm, rng);
        for (std::size_t start = 0; start < n; start += config.batch_size) {
            std::size_t len = std::min(config.batch_size, n - start);
            gradient(result.model, std::span<const std::size_t>(perm.data() + start, len), grad);
            for (std::size_t k = 0; k < dim; ++k)
                result.model.weights[k] -=
                    config.learning_rate * (grad.weights[k] + config.l2 * result.model.weights[k]);
            result.model.bias -= config.learning_rate * grad.bias;
        }
        record(epoch);
    }
    return result;
}

}  // namespace

TrainResult train_sgd(const PairDataset& pairs, const TrainConfig& config) {
    const Objective& obj = config.objective;
    switch (obj.kind) {
        case ObjectiveKind::cips:
            return run_sgd(
                config, pairs.size(), pairs.dim,
                [&](const LinearModel& m, std::span<const std::size_t> idxs, Gradient& g) {
                    pairwise_gradient_at(m, pairs, idxs, obj.loss, g);
                },
                [&](const LinearModel& m) { return pairwise_surrogate_risk(m, pairs, obj.loss); });
        case ObjectiveKind::sd: {
            ClassPrior prior(obj.prior_pos);
            if (prior.prior_pos == 0.5)
                throw BalancedPriorError("train_sgd: SD objective undefined at balanced prior");
            return run_sgd(
                config, pairs.size(), pairs.dim,
                [&](const LinearModel& m, std::span<const std::size_t> idxs, Gradient& g) {
                    sd_gradient_at(m, pairs, idxs, prior, obj.loss, g);
                },
                [&](const LinearModel& m) { return sd_surrogate_risk(m, pairs, prior, obj.loss); });
        }
        case ObjectiveKind::mcl:
            return run_sgd(
                config, pairs.size(), pairs.dim,
                [&](const LinearModel& m, std::span<const std::size_t> idxs, Gradient& g) {
                    mcl_gradient_at(m, pairs, idxs, g);
                },
                [&](const LinearModel& m) { return mcl_objective(m, pairs); });
        case ObjectiveKind::supervised:
            throw std::invalid_argument("train_sgd: supervised objective needs labeled points");
    }
    throw std::invalid_argument("train_sgd: unknown objective");
}

TrainResult train_sgd(const Dataset& data, const TrainConfig& config) {
    if (config.objective.kind != ObjectiveKind::supervised)
        throw std::invalid_argument("train_sgd: labeled-point training is supervised only");
    LossKind loss = config.objective.loss;
    return run_sgd(
        config, data.size(), data.dim,
        [&](const LinearModel& m, std::span<const std::size_t> idxs, Gradient& g) {
            supervised_gradient_at(m, data, idxs, loss, g);
        },
        [&](const LinearModel& m) { return supervised_surrogate_risk(m, data, loss); });
}

PairScatterMatrix build_pair_scatter(const PairDataset& pairs) {
    if (pairs.samples.empty()) throw std::invalid_argument("build_pair_scatter: empty pair dataset");
    if (pairs.dim > kScatterDimCap)
        throw std::invalid_argument(
            "build_pair_scatter: dim " + std::to_string(pairs.dim) + " exceeds " +
            std::to_string(kScatterDimCap) + "; use the SGD trainer for high-dimensional data");
    PairScatterMatrix m;
    m.dim = pairs.dim;
    m.values.assign(m.dim * m.dim, 0.0);
    const double scale = 1.0 / (2.0 * static_cast<double>(pairs.size()));
    for (const auto& p : pairs.samples) {
        for (const auto& [i, vi] : p.x.entries) {
            for (const auto& [j, vj] : p.x_prime.entries) {
                // Symmetric update: the (i,j) and (j,i) cells receive the
                // same addends in the same order, so M is exactly symmetric.
                double add = p.tau * vi * vj * scale;
                m.values[(i - 1) * m.dim + (j - 1)] += add;
                m.values[(j - 1) * m.dim + (i - 1)] += add;
            }
        }
    }
    return m;
}

namespace {

double norm1(const PairScatterMatrix& m) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.dim; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < m.dim; ++i) col += std::fabs(m.at(i, j));
        best = std::max(best, col);
    }
    return best;
}

void multiply_shifted(const PairScatterMatrix& m, double shift, const std::vector<double>& v,
                      std::vector<double>& out) {
    for (std::size_t i = 0; i < m.dim; ++i) {
        double s = shift * v[i];
        const double* row = m.values.data() + i * m.dim;
        for (std::size_t j = 0; j < m.dim; ++j) s += row[j] * v[j];
        out[i] = s;
    }
}

double norm2(const std::vector<double>& v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    return std::sqrt(sq);
}

void fix_sign(std::vector<double>& v) {
    for (double x : v) {
        if (x != 0.0) {
            if (x < 0.0)
                for (double& y : v) y = -y;
            return;
        }
    }
}

}  // namespace

PowerIterationResult power_iteration_top(const PairScatterMatrix& m) {
    if (m.dim == 0) throw std::invalid_argument("power_iteration_top: empty matrix");
    PowerIterationResult result;
    result.vector.assign(m.dim, 0.0);

    const double shift = norm1(m);
    if (shift == 0.0) {
        // Zero matrix: every unit vector attains the same Rayleigh quotient.
        result.vector[0] = 1.0;
        return result;
    }

    // Deterministic pseudo-random start; a fixed vector such as all-ones can
    // land exactly in the kernel of M + shift I.
    Rng rng(0x7069746f70ULL);
    std::vector<double> v(m.dim), next(m.dim);
    double vnorm = 0.0;
    do {
        for (double& x : v) x = rng.normal();
        vnorm = norm2(v);
    } while (vnorm == 0.0);
    for (double& x : v) x /= vnorm;

    for (std::size_t it = 1; it <= kPowerIterationCap; ++it) {
        multiply_shifted(m, shift, v, next);
        double len = norm2(next);
        if (len == 0.0) {
            // Start vector sat in the kernel; redraw and continue.
            for (double& x : v) x = rng.normal();
            double n2 = norm2(v);
            for (double& x : v) x /= n2;
            continue;
        }
        for (double& x : next) x /= len;
        double cos = 0.0;
        for (std::size_t k = 0; k < m.dim; ++k) cos += next[k] * v[k];
        v.swap(next);
        if (1.0 - cos <= kPowerIterationTol) {
            fix_sign(v);
            result.vector = v;
            multiply_shifted(m, 0.0, v, next);
            double rayleigh = 0.0;
            for (std::size_t k = 0; k < m.dim; ++k) rayleigh += v[k] * next[k];
            result.eigenvalue = rayleigh;
            result.iterations = it;
            return result;
        }
    }
    throw std::runtime_error("power_iteration_top: no convergence within " +
                             std::to_string(kPowerIterationCap) + " iterations");
}

LinearModel train_unhinged_closed_form(const PairDataset& pairs) {
    PowerIterationResult top = power_iteration_top(build_pair_scatter(pairs));
    LinearModel model;
    model.weights = std::move(top.vector);
    model.bias = 0.0;
    return model;
}

}  // namespace pairelicit
