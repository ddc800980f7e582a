#include "pairelicit/assign.hpp"

#include <cmath>

#include "pairelicit/common.hpp"

namespace pairelicit {

namespace {

std::size_t count_mistakes(const SignedClassifier& clf, const Dataset& data) {
    if (data.samples.empty()) throw std::invalid_argument("evaluation on empty dataset");
    std::size_t k = 0;
    for (const auto& s : data.samples) k += clf.predict_label(s.x) != s.y;
    return k;
}

}  // namespace

double pointwise_error(const SignedClassifier& clf, const Dataset& data) {
    return static_cast<double>(count_mistakes(clf, data)) / static_cast<double>(data.size());
}

double clustering_error(const SignedClassifier& clf, const Dataset& data) {
    double e = pointwise_error(clf, data);
    return std::min(e, 1.0 - e);
}

double pairwise_error(const SignedClassifier& clf, const PairDataset& pairs) {
    if (pairs.samples.empty()) throw std::invalid_argument("pairwise_error: empty pair dataset");
    std::size_t bad = 0;
    for (const auto& p : pairs.samples)
        bad += clf.model.predict_sign(p.x) * clf.model.predict_sign(p.x_prime) != p.tau;
    return static_cast<double>(bad) / static_cast<double>(pairs.size());
}

double clustering_from_pairwise(double pairwise_risk) {
    if (!(pairwise_risk >= 0.0) || pairwise_risk > 0.5)
        throw std::domain_error("clustering_from_pairwise: pairwise risk must lie in [0, 1/2]");
    return 0.5 - std::sqrt(1.0 - 2.0 * pairwise_risk) / 2.0;
}

double q_statistic(const LinearModel& model, const PairDataset& pairs) {
    if (pairs.samples.empty()) throw std::invalid_argument("q_statistic: empty pair dataset");
    std::size_t mismatches = 0;  // numerator of 2 Q; exact integer count
    for (const auto& p : pairs.samples) {
        mismatches += model.predict_sign(p.x) != p.tau;
        mismatches += model.predict_sign(p.x_prime) != p.tau;
    }
    return static_cast<double>(mismatches) / (2.0 * static_cast<double>(pairs.size()));
}

int assign_sign(ClassPrior prior, double q) {
    if (prior.prior_pos == 0.5)
        throw BalancedPriorError("assign_sign: class assignment infeasible at balanced prior");
    return sign_pm(2.0 * prior.prior_pos - 1.0) * sign_pm(1.0 - 2.0 * q);
}

int assign_sign_pointwise(const LinearModel& model, const Dataset& validation) {
    SignedClassifier clf{model, 1};
    double e = pointwise_error(clf, validation);
    return e <= 1.0 - e ? 1 : -1;
}

double assignment_error_bound(ClassPrior prior, std::size_t m2, double r_point) {
    double a = 2.0 * prior.prior_pos - 1.0;
    double b = 2.0 * r_point - 1.0;
    return std::exp(-(static_cast<double>(m2) / 2.0) * a * a * b * b);
}

int naive_assign(const LinearModel& model, const Dataset& unlabeled, ClassPrior prior) {
    if (unlabeled.samples.empty()) throw std::invalid_argument("naive_assign: empty dataset");
    if (prior.prior_pos == 0.5)
        throw BalancedPriorError("naive_assign: class assignment infeasible at balanced prior");
    KahanSum acc;
    for (const auto& s : unlabeled.samples) acc.add(model.predict_sign(s.x));
    double mean = acc.value() / static_cast<double>(unlabeled.size());
    return sign_pm(2.0 * prior.prior_pos - 1.0) * sign_pm(mean);
}

bool naive_assign_succeeds(ClassPrior prior, double r_plus, double r_minus) {
    if (r_plus < 0.0 || r_plus > prior.prior_pos)
        throw std::invalid_argument("naive_assign_succeeds: r_plus must lie in [0, prior_pos]");
    if (r_minus < 0.0 || r_minus > 1.0 - prior.prior_pos)
        throw std::invalid_argument("naive_assign_succeeds: r_minus must lie in [0, 1 - prior_pos]");
    int product = sign_pm(2.0 * prior.prior_pos - 1.0) *
                  sign_pm(-2.0 * r_plus + 2.0 * r_minus + 2.0 * prior.prior_pos - 1.0) *
                  sign_pm(1.0 - 2.0 * r_plus - 2.0 * r_minus);
    return product > 0;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double threshold_pointwise_error(double theta, const GaussianMixtureSpec& spec) {
    double miss_pos = normal_cdf((theta - spec.mu_pos) / spec.sigma_pos);
    double miss_neg = 1.0 - normal_cdf((theta - spec.mu_neg) / spec.sigma_neg);
    return spec.prior_pos * miss_pos + (1.0 - spec.prior_pos) * miss_neg;
}

RiskReport make_risk_report(const SignedClassifier& clf, const Dataset& data) {
    const auto n = static_cast<double>(data.size());
    const auto k = static_cast<double>(count_mistakes(clf, data));
    RiskReport report;
    report.pointwise = k / n;
    report.clustering = std::min(report.pointwise, 1.0 - report.pointwise);
    report.pairwise = 2.0 * k * (n - k) / (n * n);
    return report;
}

}  // namespace pairelicit
