#pragma once

#include <cstdint>

#include "pairelicit/risk.hpp"

namespace pairelicit {

enum class ObjectiveKind {
    cips,        // pairwise surrogate risk on f(x) f(x')
    sd,          // similar/dissimilar rescaled pointwise surrogate (needs a prior)
    mcl,         // pair-likelihood objective (loss fixed by its definition)
    supervised,  // plain pointwise surrogate on labeled data
};

struct Objective {
    ObjectiveKind kind = ObjectiveKind::cips;
    LossKind loss = LossKind::logistic;
    double prior_pos = 0.5;  // read only for ObjectiveKind::sd
};

struct TrainConfig {
    Objective objective;
    double learning_rate = 1e-2;
    std::size_t batch_size = 64;
    std::size_t epochs = 500;
    double l2 = 1e-4;  // penalty (l2/2)*||w||^2; the bias is not penalized
    std::uint64_t seed = 0;
};

struct TrainResult {
    LinearModel model;
    // Full-data objective (including the l2 penalty) at initialization and
    // after each epoch: epochs + 1 entries.
    std::vector<double> trace;
};

// Minibatch SGD with a fresh full permutation every epoch; the trailing
// partial batch is kept. Deterministic given (config, data): identical seeds
// give bit-identical models.
//
// Weights start at zero except for cips/mcl, whose objectives are invariant
// under f -> -f and have exactly zero gradient at the zero model; those start
// from i.i.d. uniform weights in [-1e-2, 1e-2] drawn from the config seed.
//
// A non-finite objective raises DivergenceError with the epoch index.
TrainResult train_sgd(const PairDataset& pairs, const TrainConfig& config);
TrainResult train_sgd(const Dataset& data, const TrainConfig& config);  // supervised only

// Dense symmetric pair-scatter matrix M = (1/2m) sum tau (x x'^T + x'^T x).
// Refuses dim > 10^4; at that size use the SGD path instead.
struct PairScatterMatrix {
    std::vector<double> values;  // row-major, dim x dim
    std::size_t dim = 0;

    double at(std::size_t i, std::size_t j) const { return values[i * dim + j]; }
};

PairScatterMatrix build_pair_scatter(const PairDataset& pairs);

struct PowerIterationResult {
    std::vector<double> vector;  // unit norm, first nonzero coordinate positive
    double eigenvalue = 0.0;     // Rayleigh quotient v^T M v of the unshifted matrix
    std::size_t iterations = 0;
};

// Top eigenvector of M via power iteration on M + c I with c = ||M||_1, which
// makes the shifted matrix positive semidefinite without reordering the
// spectrum. Stops when successive unit iterates satisfy 1 - <v, v'> <= 1e-10;
// errors after 1e5 iterations, reporting the residual.
PowerIterationResult power_iteration_top(const PairScatterMatrix& m);

// Closed-form minimizer of the unhinged pairwise risk over unit-norm weights
// with zero bias: the top pair-scatter eigenvector. The attained risk equals
// 1 - w^T M w.
LinearModel train_unhinged_closed_form(const PairDataset& pairs);

}  // namespace pairelicit
