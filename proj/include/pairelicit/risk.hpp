#pragma once

#include <span>

#include "pairelicit/data.hpp"
#include "pairelicit/model.hpp"

namespace pairelicit {

// Positive-class prior, validated to lie strictly inside (0, 1). Estimators
// that rescale by (2*prior_pos - 1) additionally reject 0.5 at the call site.
struct ClassPrior {
    explicit ClassPrior(double p);
    double prior_pos;
};

// Mixing weights of the semi-supervised risk decomposition; nonnegative and
// summing to 1 within 1e-12.
struct GammaWeights {
    GammaWeights(double g1_, double g2_, double g3_);
    double g1, g2, g3;
};

struct Gradient {
    std::vector<double> weights;
    double bias = 0.0;
};

// Mean of ell(f(x) * f(x'), tau) over the pairs. The first-stage objective.
double pairwise_surrogate_risk(const LinearModel& model, const PairDataset& pairs, LossKind kind);

// Mean gradient of the pairwise surrogate risk over `batch`. With
// z = f(x) f(x'), the product rule gives dz/dw = f(x') x + f(x) x' and
// dz/db = f(x) + f(x').
Gradient pairwise_risk_gradient(const LinearModel& model, const PairDataset& batch, LossKind kind);

// Unbiased pointwise-risk estimate for a signed classifier built from
// similar/dissimilar pairs alone:
//   mean[(1{h(x) != tau} + 1{h(x') != tau}) / (2 (2 pi - 1))] - (1 - pi)/(2 pi - 1).
// Undefined at pi = 0.5. The value may be negative; it is returned as-is.
double sd_pointwise_risk(const SignedClassifier& clf, const PairDataset& pairs, ClassPrior prior);

// Surrogate form of the same estimator: indicators replaced by ell(f(.), tau).
double sd_surrogate_risk(const LinearModel& model, const PairDataset& pairs, ClassPrior prior,
                         LossKind kind);

// Pair-likelihood objective: with q(z) = 1/(1 + e^-z) and
// qq(z, z') = q(z) q(z') + (1-q(z))(1-q(z')), the mean over pairs of
//   -S log qq - (1 - S) log(1 - qq),   S = (tau + 1)/2,
// log arguments clamped below at 1e-12.
double mcl_objective(const LinearModel& model, const PairDataset& pairs);

// Mean of ell(f(x), y) over labeled points; the fully supervised objective.
double supervised_surrogate_risk(const LinearModel& model, const Dataset& data, LossKind kind);

// Pairwise-risk estimate combining similar, dissimilar, and unlabeled pairs:
//   (pi+^2 + pi-^2) * E_sim[(g1 + g2) ell(z, +1) - g2 ell(z, -1)]
//   + 2 pi+ pi-     * E_dis[(g1 + g3) ell(z, -1) - g3 ell(z, +1)]
//   +                 E_unl[g3 ell(z, +1) + g2 ell(z, -1)]
// with z = f(x) f(x'). A dataset may be empty only if its gamma weights
// remove it from the estimate.
double semi_supervised_risk(const LinearModel& model, const PairDataset& similar,
                            const PairDataset& dissimilar, const PairDataset& unlabeled,
                            ClassPrior prior, GammaWeights gamma, LossKind kind);

// Batch-mean gradients over pairs.samples[idxs], written into `out`
// (resized/zeroed here). These back the SGD loop; pairwise_gradient_at is the
// engine behind pairwise_risk_gradient.
void pairwise_gradient_at(const LinearModel& model, const PairDataset& pairs,
                          std::span<const std::size_t> idxs, LossKind kind, Gradient& out);
void sd_gradient_at(const LinearModel& model, const PairDataset& pairs,
                    std::span<const std::size_t> idxs, ClassPrior prior, LossKind kind,
                    Gradient& out);
void mcl_gradient_at(const LinearModel& model, const PairDataset& pairs,
                     std::span<const std::size_t> idxs, Gradient& out);
void supervised_gradient_at(const LinearModel& model, const Dataset& data,
                            std::span<const std::size_t> idxs, LossKind kind, Gradient& out);

}  // namespace pairelicit
