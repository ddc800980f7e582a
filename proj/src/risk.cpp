#include "pairelicit/risk.hpp"

#include <cmath>

#include "pairelicit/common.hpp"

namespace pairelicit {

namespace {

constexpr double kLogClamp = 1e-12;

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

void require_nonempty(const PairDataset& pairs, const char* who) {
    if (pairs.samples.empty()) throw std::invalid_argument(std::string(who) + ": empty pair dataset");
}

double rescale_denominator(ClassPrior prior, const char* who) {
    if (prior.prior_pos == 0.5)
        throw BalancedPriorError(std::string(who) + ": SD risk undefined at balanced prior");
    return 2.0 * prior.prior_pos - 1.0;
}

void reset(Gradient& out, std::size_t dim) {
    out.weights.assign(dim, 0.0);
    out.bias = 0.0;
}

void axpy(std::vector<double>& w, double alpha, const FeatureVector& x) {
    for (const auto& [idx, val] : x.entries) w[idx - 1] += alpha * val;
}

void scale(Gradient& g, double alpha) {
    for (double& w : g.weights) w *= alpha;
    g.bias *= alpha;
}

}  // namespace

ClassPrior::ClassPrior(double p) : prior_pos(p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::invalid_argument("class prior must lie strictly in (0, 1)");
}

GammaWeights::GammaWeights(double g1_, double g2_, double g3_) : g1(g1_), g2(g2_), g3(g3_) {
    if (g1 < 0 || g2 < 0 || g3 < 0)
        throw std::invalid_argument("gamma weights must be nonnegative");
    if (std::fabs(g1 + g2 + g3 - 1.0) > 1e-12)
        throw std::invalid_argument("gamma weights must sum to 1");
}

double pairwise_surrogate_risk(const LinearModel& model, const PairDataset& pairs, LossKind kind) {
    require_nonempty(pairs, "pairwise_surrogate_risk");
    KahanSum acc;
    for (const auto& p : pairs.samples) {
        double z = model.predict_score(p.x) * model.predict_score(p.x_prime);
        acc.add(loss_value(kind, z, p.tau));
    }
    return acc.value() / static_cast<double>(pairs.size());
}

Gradient pairwise_risk_gradient(const LinearModel& model, const PairDataset& batch, LossKind kind) {
    require_nonempty(batch, "pairwise_risk_gradient");
    std::vector<std::size_t> idxs(batch.size());
    for (std::size_t i = 0; i < idxs.size(); ++i) idxs[i] = i;
    Gradient g;
    pairwise_gradient_at(model, batch, idxs, kind, g);
    return g;
}

void pairwise_gradient_at(const LinearModel& model, const PairDataset& pairs,
                          std::span<const std::size_t> idxs, LossKind kind, Gradient& out) {
    reset(out, model.dim());
    for (std::size_t i : idxs) {
        const auto& p = pairs.samples[i];
        double f1 = model.predict_score(p.x);
        double f2 = model.predict_score(p.x_prime);
        double g = loss_derivative(kind, f1 * f2, p.tau);
        axpy(out.weights, g * f2, p.x);
        axpy(out.weights, g * f1, p.x_prime);
        out.bias += g * (f1 + f2);
    }
    scale(out, 1.0 / static_cast<double>(idxs.size()));
}

double sd_pointwise_risk(const SignedClassifier& clf, const PairDataset& pairs, ClassPrior prior) {
    require_nonempty(pairs, "sd_pointwise_risk");
    double denom = rescale_denominator(prior, "sd_pointwise_risk");
    KahanSum acc;
    for (const auto& p : pairs.samples) {
        int mismatches = (clf.predict_label(p.x) != p.tau) + (clf.predict_label(p.x_prime) != p.tau);
        acc.add(mismatches);
    }
    double mean = acc.value() / (2.0 * static_cast<double>(pairs.size()));
    return mean / denom - (1.0 - prior.prior_pos) / denom;
}

double sd_surrogate_risk(const LinearModel& model, const PairDataset& pairs, ClassPrior prior,
                         LossKind kind) {
    require_nonempty(pairs, "sd_surrogate_risk");
    double denom = rescale_denominator(prior, "sd_surrogate_risk");
    KahanSum acc;
    for (const auto& p : pairs.samples) {
        double t = p.tau;
        acc.add(loss_value(kind, model.predict_score(p.x), t) +
                loss_value(kind, model.predict_score(p.x_prime), t));
    }
    double mean = acc.value() / (2.0 * static_cast<double>(pairs.size()));
    return mean / denom - (1.0 - prior.prior_pos) / denom;
}

void sd_gradient_at(const LinearModel& model, const PairDataset& pairs,
                    std::span<const std::size_t> idxs, ClassPrior prior, LossKind kind,
                    Gradient& out) {
    double denom = rescale_denominator(prior, "sd_gradient_at");
    reset(out, model.dim());
    for (std::size_t i : idxs) {
        const auto& p = pairs.samples[i];
        double t = p.tau;
        double g1 = loss_derivative(kind, model.predict_score(p.x), t);
        double g2 = loss_derivative(kind, model.predict_score(p.x_prime), t);
        axpy(out.weights, g1, p.x);
        axpy(out.weights, g2, p.x_prime);
        out.bias += g1 + g2;
    }
    scale(out, 1.0 / (2.0 * denom * static_cast<double>(idxs.size())));
}

namespace {

struct MclTerms {
    double qq;        // clamped pair-agreement probability
    double d1, d2;    // d qq / d f1, d qq / d f2 (of the unclamped qq)
};

MclTerms mcl_terms(double f1, double f2) {
    double q1 = sigmoid(f1);
    double q2 = sigmoid(f2);
    double qq = q1 * q2 + (1.0 - q1) * (1.0 - q2);
    MclTerms t;
    t.qq = std::min(std::max(qq, kLogClamp), 1.0 - kLogClamp);
    t.d1 = q1 * (1.0 - q1) * (2.0 * q2 - 1.0);
    t.d2 = q2 * (1.0 - q2) * (2.0 * q1 - 1.0);
    return t;
}

}  // namespace

double mcl_objective(const LinearModel& model, const PairDataset& pairs) {
    require_nonempty(pairs, "mcl_objective");
    KahanSum acc;
    for (const auto& p : pairs.samples) {
        MclTerms t = mcl_terms(model.predict_score(p.x), model.predict_score(p.x_prime));
        double s = (p.tau + 1) / 2.0;
        acc.add(-s * std::log(t.qq) - (1.0 - s) * std::log(1.0 - t.qq));
    }
    return acc.value() / static_cast<double>(pairs.size());
}

void mcl_gradient_at(const LinearModel& model, const PairDataset& pairs,
                     std::span<const std::size_t> idxs, Gradient& out) {
    reset(out, model.dim());
    for (std::size_t i : idxs) {
        const auto& p = pairs.samples[i];
        MclTerms t = mcl_terms(model.predict_score(p.x), model.predict_score(p.x_prime));
        double s = (p.tau + 1) / 2.0;
        double dl = -s / t.qq + (1.0 - s) / (1.0 - t.qq);
        axpy(out.weights, dl * t.d1, p.x);
        axpy(out.weights, dl * t.d2, p.x_prime);
        out.bias += dl * (t.d1 + t.d2);
    }
    scale(out, 1.0 / static_cast<double>(idxs.size()));
}

double supervised_surrogate_risk(const LinearModel& model, const Dataset& data, LossKind kind) {
    if (data.samples.empty()) throw std::invalid_argument("supervised_surrogate_risk: empty dataset");
    KahanSum acc;
    for (const auto& s : data.samples) acc.add(loss_value(kind, model.predict_score(s.x), s.y));
    return acc.value() / static_cast<double>(data.size());
}

void supervised_gradient_at(const LinearModel& model, const Dataset& data,
                            std::span<const std::size_t> idxs, LossKind kind, Gradient& out) {
    reset(out, model.dim());
    for (std::size_t i : idxs) {
        const auto& s = data.samples[i];
        double g = loss_derivative(kind, model.predict_score(s.x), s.y);
        axpy(out.weights, g, s.x);
        out.bias += g;
    }
    scale(out, 1.0 / static_cast<double>(idxs.size()));
}

double semi_supervised_risk(const LinearModel& model, const PairDataset& similar,
                            const PairDataset& dissimilar, const PairDataset& unlabeled,
                            ClassPrior prior, GammaWeights gamma, LossKind kind) {
    const double pp = prior.prior_pos;
    const double pn = 1.0 - pp;

    auto mean_combo = [&](const PairDataset& pairs, double c_pos, double c_neg, const char* who) {
        if (c_pos == 0.0 && c_neg == 0.0) return 0.0;
        if (pairs.samples.empty())
            throw std::invalid_argument(std::string("semi_supervised_risk: ") + who +
                                        " pairs required by nonzero gamma weights");
        KahanSum acc;
        for (const auto& p : pairs.samples) {
            double z = model.predict_score(p.x) * model.predict_score(p.x_prime);
            acc.add(c_pos * loss_value(kind, z, 1.0) + c_neg * loss_value(kind, z, -1.0));
        }
        return acc.value() / static_cast<double>(pairs.size());
    };

    double sim = mean_combo(similar, gamma.g1 + gamma.g2, -gamma.g2, "similar");
    double dis = mean_combo(dissimilar, -gamma.g3, gamma.g1 + gamma.g3, "dissimilar");
    double unl = mean_combo(unlabeled, gamma.g3, gamma.g2, "unlabeled");
    return (pp * pp + pn * pn) * sim + 2.0 * pp * pn * dis + unl;
}

}  // namespace pairelicit
