#include <doctest.h>

#include "oracles.hpp"
#include "pairelicit/risk.hpp"
#include "pairelicit/rng.hpp"

using namespace pairelicit;

namespace {

PairDataset two_pair_example() {
    PairDataset pairs;
    pairs.dim = 2;
    pairs.samples.push_back({oracles::dense_features({1, 0}), oracles::dense_features({2, 0}), 1});
    pairs.samples.push_back({oracles::dense_features({1, 0}), oracles::dense_features({-1, 0}), 1});
    return pairs;
}

PairDataset random_pairs(std::size_t m, std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    PairDataset pairs;
    pairs.dim = static_cast<std::uint32_t>(dim);
    for (std::size_t k = 0; k < m; ++k) {
        std::vector<double> a(dim), b(dim);
        for (auto& v : a) v = rng.normal();
        for (auto& v : b) v = rng.normal();
        pairs.samples.push_back(
            {oracles::dense_features(a), oracles::dense_features(b), rng.bernoulli(0.5) ? 1 : -1});
    }
    return pairs;
}

LinearModel random_model(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    LinearModel m;
    for (std::size_t i = 0; i < dim; ++i) m.weights.push_back(rng.normal());
    m.bias = rng.normal();
    return m;
}

}  // namespace

TEST_CASE("pairwise surrogate risk matches hand-computed unhinged example") {
    LinearModel m{{1.0, 0.0}, 0.0};
    // scores 1*2 = 2 and 1*(-1) = -1; unhinged losses (1-2) and (1+1)
    CHECK(pairwise_surrogate_risk(m, two_pair_example(), LossKind::unhinged) ==
          doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("pairwise surrogate risk of the zero model is the loss at zero") {
    LinearModel zero{{0.0, 0.0}, 0.0};
    CHECK(pairwise_surrogate_risk(zero, two_pair_example(), LossKind::logistic) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(pairwise_surrogate_risk(zero, two_pair_example(), LossKind::unhinged) ==
          doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("pairwise surrogate risk agrees with naive recomputation") {
    PairDataset pairs = random_pairs(500, 4, 21);
    LinearModel m = random_model(4, 22);
    for (LossKind kind : {LossKind::logistic, LossKind::hinge, LossKind::squared,
                          LossKind::unhinged, LossKind::linear}) {
        double naive = 0.0;
        for (const auto& p : pairs.samples) {
            double f1 = m.bias, f2 = m.bias;
            for (const auto& [idx, val] : p.x.entries) f1 += m.weights[idx - 1] * val;
            for (const auto& [idx, val] : p.x_prime.entries) f2 += m.weights[idx - 1] * val;
            naive += loss_value(kind, f1 * f2, p.tau);
        }
        naive /= static_cast<double>(pairs.size());
        CHECK(pairwise_surrogate_risk(m, pairs, kind) == doctest::Approx(naive).epsilon(1e-13));
    }
}

TEST_CASE("pairwise risk is invariant under negating the model") {
    PairDataset pairs = random_pairs(200, 3, 31);
    LinearModel m = random_model(3, 32);
    for (LossKind kind : {LossKind::logistic, LossKind::squared, LossKind::unhinged})
        CHECK(pairwise_surrogate_risk(m, pairs, kind) ==
              pairwise_surrogate_risk(m.negated(), pairs, kind));
}

TEST_CASE("pairwise gradient matches the single-pair hand example") {
    LinearModel m{{1.0}, 0.0};
    PairDataset pair;
    pair.dim = 1;
    pair.samples.push_back({oracles::dense_features({2}), oracles::dense_features({3}), 1});
    Gradient g = pairwise_risk_gradient(m, pair, LossKind::unhinged);
    // z = 6, dl/dz = -1, dz/dw = f(x')*x + f(x)*x' = 3*2 + 2*3
    CHECK(g.weights[0] == doctest::Approx(-12.0).epsilon(1e-15));
    CHECK(g.bias == doctest::Approx(-5.0).epsilon(1e-15));
}

TEST_CASE("pairwise gradient vanishes at the zero model") {
    LinearModel zero{{0.0, 0.0, 0.0}, 0.0};
    PairDataset pairs = random_pairs(50, 3, 41);
    for (LossKind kind : {LossKind::logistic, LossKind::squared, LossKind::unhinged}) {
        Gradient g = pairwise_risk_gradient(zero, pairs, kind);
        for (double w : g.weights) CHECK(w == 0.0);
        CHECK(g.bias == 0.0);
    }
}

TEST_CASE("pairwise gradient matches central finite differences") {
    for (std::uint64_t inst = 0; inst < 10; ++inst) {
        Rng rng(100 + inst);
        std::size_t dim = 1 + rng.below(5);
        PairDataset pairs = random_pairs(1 + rng.below(8), dim, 200 + inst);
        LinearModel m = random_model(dim, 300 + inst);
        for (LossKind kind : {LossKind::logistic, LossKind::squared, LossKind::unhinged}) {
            Gradient g = pairwise_risk_gradient(m, pairs, kind);
            for (std::size_t k = 0; k <= dim; ++k) {
                auto risk_at = [&](double v) {
                    LinearModel probe = m;
                    if (k < dim)
                        probe.weights[k] = v;
                    else
                        probe.bias = v;
                    return pairwise_surrogate_risk(probe, pairs, kind);
                };
                double base = k < dim ? m.weights[k] : m.bias;
                double fd = oracles::central_difference(risk_at, base, 1e-6);
                double analytic = k < dim ? g.weights[k] : g.bias;
                CHECK(std::fabs(analytic - fd) / std::max({1.0, std::fabs(analytic)}) < 1e-5);
            }
        }
    }
}

namespace {

Dataset prior07_dataset() {
    // 7 positives, 3 negatives; positives sit at x > 0, negatives at x < 0
    Dataset d;
    d.dim = 1;
    for (int i = 1; i <= 7; ++i) d.samples.push_back({oracles::dense_features({double(i)}), 1});
    for (int i = 1; i <= 3; ++i) d.samples.push_back({oracles::dense_features({-double(i)}), -1});
    return d;
}

}  // namespace

TEST_CASE("sd pointwise risk is 0 for the perfect and 1 for the always-wrong classifier") {
    Dataset d = prior07_dataset();
    PairDataset pairs = make_all_ordered_pairs(d);
    ClassPrior prior(0.7);
    SignedClassifier perfect{LinearModel{{1.0}, 0.0}, 1};
    SignedClassifier wrong{LinearModel{{-1.0}, 0.0}, 1};
    CHECK(sd_pointwise_risk(perfect, pairs, prior) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sd_pointwise_risk(wrong, pairs, prior) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sd pointwise risk equals the rescaled q statistic") {
    Dataset d = prior07_dataset();
    PairDataset pairs = make_all_ordered_pairs(d);
    ClassPrior prior(0.7);
    for (int trial = 0; trial < 20; ++trial) {
        LinearModel m = random_model(1, 500 + trial);
        SignedClassifier clf{m, 1};
        // recompute Q naively over the same pairs
        double q = 0.0;
        for (const auto& p : pairs.samples) {
            q += (clf.model.predict_sign(p.x) != p.tau) * 0.5;
            q += (clf.model.predict_sign(p.x_prime) != p.tau) * 0.5;
        }
        q /= static_cast<double>(pairs.size());
        double expected = (q - (1.0 - 0.7)) / (2.0 * 0.7 - 1.0);
        CHECK(sd_pointwise_risk(clf, pairs, prior) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("sd risks reject the balanced prior") {
    PairDataset pairs = two_pair_example();
    SignedClassifier clf{LinearModel{{1.0, 0.0}, 0.0}, 1};
    CHECK_THROWS_AS(sd_pointwise_risk(clf, pairs, ClassPrior(0.5)), BalancedPriorError);
    CHECK_THROWS_AS(sd_surrogate_risk(clf.model, pairs, ClassPrior(0.5), LossKind::logistic),
                    BalancedPriorError);
    CHECK_THROWS_AS(ClassPrior(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ClassPrior(1.0), std::invalid_argument);
}

TEST_CASE("sd risk estimates can be negative and are returned unclamped") {
    // perfect classifier; sampled pair multiset underrepresents negatives
    // relative to the supplied prior 0.7, driving the estimate below zero
    Dataset d;
    d.dim = 1;
    d.samples.push_back({oracles::dense_features({1.0}), 1});
    d.samples.push_back({oracles::dense_features({-1.0}), -1});
    PairDataset pairs;
    pairs.dim = 1;
    auto& s = d.samples;
    pairs.samples.push_back({s[0].x, s[0].x, 1});
    pairs.samples.push_back({s[0].x, s[0].x, 1});
    pairs.samples.push_back({s[0].x, s[1].x, -1});
    pairs.samples.push_back({s[1].x, s[0].x, -1});
    SignedClassifier perfect{LinearModel{{1.0}, 0.0}, 1};
    // indicator means: positives-as-tau mismatches = 2 of 8 slots -> 0.25
    double expected = (0.25 + 0.25) / (2 * 0.4) - 0.3 / 0.4;
    CHECK(expected < 0.0);
    CHECK(sd_pointwise_risk(perfect, pairs, ClassPrior(0.7)) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("sd surrogate risk of the zero model matches its closed form") {
    PairDataset pairs = random_pairs(100, 2, 61);
    LinearModel zero{{0.0, 0.0}, 0.0};
    double expected = std::log(2.0) / 0.4 - 0.75;
    CHECK(sd_surrogate_risk(zero, pairs, ClassPrior(0.7), LossKind::logistic) ==
          doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("sd surrogate risk with the 0-1 indicator reduces to the pointwise form") {
    Dataset d = prior07_dataset();
    PairDataset pairs = make_all_ordered_pairs(d);
    ClassPrior prior(0.7);
    LinearModel m = random_model(1, 71);
    SignedClassifier clf{m, 1};
    // replace ell(f(.), tau) with 1{sign f != tau} by hand
    double acc = 0.0;
    for (const auto& p : pairs.samples) {
        acc += m.predict_sign(p.x) != p.tau;
        acc += m.predict_sign(p.x_prime) != p.tau;
    }
    double naive = acc / (2.0 * pairs.size()) / 0.4 - 0.3 / 0.4;
    CHECK(sd_pointwise_risk(clf, pairs, prior) == doctest::Approx(naive).epsilon(1e-12));
}

TEST_CASE("sd gradient matches finite differences of the sd surrogate") {
    PairDataset pairs = random_pairs(40, 3, 81);
    LinearModel m = random_model(3, 82);
    ClassPrior prior(0.3);
    std::vector<std::size_t> idxs(pairs.size());
    for (std::size_t i = 0; i < idxs.size(); ++i) idxs[i] = i;
    Gradient g;
    sd_gradient_at(m, pairs, idxs, prior, LossKind::logistic, g);
    for (std::size_t k = 0; k <= 3; ++k) {
        auto risk_at = [&](double v) {
            LinearModel probe = m;
            if (k < 3)
                probe.weights[k] = v;
            else
                probe.bias = v;
            return sd_surrogate_risk(probe, pairs, prior, LossKind::logistic);
        };
        double base = k < 3 ? m.weights[k] : m.bias;
        double fd = oracles::central_difference(risk_at, base, 1e-6);
        double analytic = k < 3 ? g.weights[k] : g.bias;
        CHECK(std::fabs(analytic - fd) / std::max(1.0, std::fabs(analytic)) < 1e-5);
    }
}

TEST_CASE("mcl objective matches hand values and an independent recomputation") {
    PairDataset pairs = two_pair_example();
    LinearModel zero{{0.0, 0.0}, 0.0};
    CHECK(mcl_objective(zero, pairs) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

    // one strongly positive pair with tau = +1 drives the objective to ~0
    PairDataset confident;
    confident.dim = 1;
    confident.samples.push_back(
        {oracles::dense_features({100.0}), oracles::dense_features({100.0}), 1});
    LinearModel unit{{1.0}, 0.0};
    CHECK(mcl_objective(unit, confident) < 1e-10);

    PairDataset rnd = random_pairs(200, 3, 91);
    LinearModel m = random_model(3, 92);
    double naive = 0.0;
    for (const auto& p : rnd.samples) {
        double f1 = m.bias, f2 = m.bias;
        for (const auto& [idx, val] : p.x.entries) f1 += m.weights[idx - 1] * val;
        for (const auto& [idx, val] : p.x_prime.entries) f2 += m.weights[idx - 1] * val;
        double q1 = 1.0 / (1.0 + std::exp(-f1));
        double q2 = 1.0 / (1.0 + std::exp(-f2));
        double qq = q1 * q2 + (1 - q1) * (1 - q2);
        double sp = (p.tau + 1) / 2.0;
        naive += -sp * std::log(std::max(qq, 1e-12)) -
                 (1 - sp) * std::log(std::max(1 - qq, 1e-12));
    }
    naive /= static_cast<double>(rnd.size());
    CHECK(mcl_objective(m, rnd) == doctest::Approx(naive).epsilon(1e-13));
}

TEST_CASE("mcl log arguments are clamped at 1e-12") {
    PairDataset pair;
    pair.dim = 1;
    pair.samples.push_back({oracles::dense_features({40.0}), oracles::dense_features({-40.0}), 1});
    LinearModel unit{{1.0}, 0.0};
    // qq collapses numerically to ~4e-18; the clamp caps the penalty
    CHECK(mcl_objective(unit, pair) == doctest::Approx(-std::log(1e-12)).epsilon(1e-10));
    CHECK(std::isfinite(mcl_objective(unit, pair)));
}

TEST_CASE("mcl gradient matches finite differences") {
    PairDataset pairs = random_pairs(40, 2, 93);
    LinearModel m = random_model(2, 94);
    std::vector<std::size_t> idxs(pairs.size());
    for (std::size_t i = 0; i < idxs.size(); ++i) idxs[i] = i;
    Gradient g;
    mcl_gradient_at(m, pairs, idxs, g);
    for (std::size_t k = 0; k <= 2; ++k) {
        auto obj_at = [&](double v) {
            LinearModel probe = m;
            if (k < 2)
                probe.weights[k] = v;
            else
                probe.bias = v;
            return mcl_objective(probe, pairs);
        };
        double base = k < 2 ? m.weights[k] : m.bias;
        double fd = oracles::central_difference(obj_at, base, 1e-6);
        double analytic = k < 2 ? g.weights[k] : g.bias;
        CHECK(std::fabs(analytic - fd) / std::max(1.0, std::fabs(analytic)) < 1e-5);
    }
}

TEST_CASE("gamma weights validate nonnegativity and the simplex constraint") {
    CHECK_NOTHROW(GammaWeights(1.0, 0.0, 0.0));
    CHECK_NOTHROW(GammaWeights(0.2, 0.3, 0.5));
    CHECK_THROWS_AS(GammaWeights(0.5, 0.6, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(GammaWeights(-0.1, 0.6, 0.5), std::invalid_argument);
}

namespace {

struct SemiFixture {
    PairDataset similar, dissimilar, unlabeled;
    LinearModel model;
    ClassPrior prior{0.3};

    SemiFixture() {
        PairDataset all = random_pairs(600, 2, 111);
        similar.dim = dissimilar.dim = unlabeled.dim = all.dim;
        for (const auto& p : all.samples) (p.tau > 0 ? similar : dissimilar).samples.push_back(p);
        unlabeled = random_pairs(400, 2, 112);
        model = random_model(2, 113);
    }
};

}  // namespace

TEST_CASE("semi-supervised risk with gamma (1,0,0) ignores unlabeled data") {
    SemiFixture fx;
    PairDataset empty;
    empty.dim = 2;
    double with_unl = semi_supervised_risk(fx.model, fx.similar, fx.dissimilar, fx.unlabeled,
                                           fx.prior, GammaWeights(1, 0, 0), LossKind::logistic);
    double without = semi_supervised_risk(fx.model, fx.similar, fx.dissimilar, empty, fx.prior,
                                          GammaWeights(1, 0, 0), LossKind::logistic);
    CHECK(with_unl == without);

    // direct recomputation of the two surviving terms
    auto mean_loss = [&](const PairDataset& pairs, double t) {
        double acc = 0.0;
        for (const auto& p : pairs.samples)
            acc += loss_value(LossKind::logistic,
                              fx.model.predict_score(p.x) * fx.model.predict_score(p.x_prime), t);
        return acc / static_cast<double>(pairs.size());
    };
    double pp = 0.3, pn = 0.7;
    double expected = (pp * pp + pn * pn) * mean_loss(fx.similar, 1.0) +
                      2 * pp * pn * mean_loss(fx.dissimilar, -1.0);
    CHECK(with_unl == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("semi-supervised risk requires datasets its gamma weights touch") {
    SemiFixture fx;
    PairDataset empty;
    empty.dim = 2;
    CHECK_THROWS_AS(semi_supervised_risk(fx.model, fx.similar, fx.dissimilar, empty, fx.prior,
                                         GammaWeights(0.5, 0.25, 0.25), LossKind::logistic),
                    std::invalid_argument);
    CHECK_THROWS_AS(semi_supervised_risk(fx.model, empty, fx.dissimilar, fx.unlabeled, fx.prior,
                                         GammaWeights(1, 0, 0), LossKind::logistic),
                    std::invalid_argument);
}

TEST_CASE("semi-supervised risk is affine in gamma") {
    SemiFixture fx;
    GammaWeights a(0.6, 0.3, 0.1), b(0.1, 0.2, 0.7), mid(0.35, 0.25, 0.4);
    auto eval = [&](GammaWeights g) {
        return semi_supervised_risk(fx.model, fx.similar, fx.dissimilar, fx.unlabeled, fx.prior, g,
                                    LossKind::squared);
    };
    CHECK(eval(mid) == doctest::Approx((eval(a) + eval(b)) / 2.0).epsilon(1e-10));
}

TEST_CASE("supervised surrogate risk averages the pointwise loss") {
    Dataset d = prior07_dataset();
    LinearModel zero{{0.0}, 0.0};
    CHECK(supervised_surrogate_risk(zero, d, LossKind::logistic) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-15));
    LinearModel sep{{1.0}, 0.0};
    CHECK(supervised_surrogate_risk(sep, d, LossKind::hinge) == 0.0);
}
