#pragma once

#include "pairelicit/risk.hpp"

namespace pairelicit {

// Fraction of labeled points with assignment * sign(f(x)) != y.
double pointwise_error(const SignedClassifier& clf, const Dataset& data);

// min over the two assignments of the pointwise error; flipping the
// assignment flips every prediction, so this is min(e, 1 - e).
double clustering_error(const SignedClassifier& clf, const Dataset& data);

// Fraction of pairs with sign(f(x)) sign(f(x')) != tau. The assignment
// cancels in the product, so only the model matters.
double pairwise_error(const SignedClassifier& clf, const PairDataset& pairs);

// Theorem bridge 1/2 - sqrt(1 - 2 r) / 2, mapping a pairwise 0-1 risk in
// [0, 1/2] to the clustering risk it certifies. Errors outside the domain.
double clustering_from_pairwise(double pairwise_risk);

// Q statistic of the raw decision sign(f): mean over pairs of
// (1{sign f(x) != tau} + 1{sign f(x') != tau}) / 2. Takes the model rather
// than a SignedClassifier because it is the quantity the second stage uses
// to pick the assignment in the first place.
double q_statistic(const LinearModel& model, const PairDataset& pairs);

// Second-stage rule: sign(2 pi - 1) * sign(1 - 2 q). With sign(0) = -1 a tie
// at q = 0.5 resolves to -sign(2 pi - 1). Errors at pi = 0.5.
int assign_sign(ClassPrior prior, double q);

// Convenience helper: pick the assignment minimizing validation pointwise
// error on a small labeled set.
int assign_sign_pointwise(const LinearModel& model, const Dataset& validation);

// Hoeffding-style bound exp(-(m2/2) (2 pi - 1)^2 (2 r - 1)^2) on the
// probability that the second stage picks the wrong sign, where r is the
// pointwise risk of sign(f) and m2 the number of assignment pairs.
double assignment_error_bound(ClassPrior prior, std::size_t m2, double r_point);

// Mean-prediction heuristic sign(2 pi - 1) * sign(mean of sign f(X)).
int naive_assign(const LinearModel& model, const Dataset& unlabeled, ClassPrior prior);

// Whether the heuristic recovers the risk-minimizing assignment at the given
// population error rates r_plus = P(f wrong, y = +1), r_minus = P(f wrong,
// y = -1):  sign(2 pi - 1) * sign(-2 r+ + 2 r- + 2 pi - 1) * sign(1 - 2 r+ - 2 r-) > 0.
bool naive_assign_succeeds(ClassPrior prior, double r_plus, double r_minus);

// Standard normal CDF via erfc, accurate to ~1e-15 relative.
double normal_cdf(double x);

// Closed-form pointwise error of the threshold rule h(x) = +1 iff x >= theta
// on the 1-D mixture: pi Phi((theta - mu+)/sigma+) + (1 - pi)(1 - Phi((theta - mu-)/sigma-)).
double threshold_pointwise_error(double theta, const GaussianMixtureSpec& spec);

struct RiskReport {
    double pointwise = 0.0;
    double clustering = 0.0;
    double pairwise = 0.0;
};

// Evaluation triple on a labeled set. The pairwise entry is the error over
// all n^2 ordered pairs, computed by exact counting: with k mistakes it is
// 2 k (n - k) / n^2.
RiskReport make_risk_report(const SignedClassifier& clf, const Dataset& data);

}  // namespace pairelicit
