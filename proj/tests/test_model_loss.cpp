#include <doctest.h>

#include "oracles.hpp"
#include "pairelicit/model.hpp"
#include "pairelicit/rng.hpp"

using namespace pairelicit;

TEST_CASE("sign convention maps zero to -1") {
    CHECK(sign_pm(3.2) == 1);
    CHECK(sign_pm(-0.1) == -1);
    CHECK(sign_pm(0.0) == -1);
    CHECK(sign_pm(-0.0) == -1);
}

TEST_CASE("linear score sums sparse entries against weights plus bias") {
    LinearModel m{{0.5, -1.0, 2.0}, 0.25};
    FeatureVector x = oracles::dense_features({2.0, 0.0, 1.0});
    CHECK(m.predict_score(x) == doctest::Approx(0.5 * 2 + 2.0 * 1 + 0.25).epsilon(1e-15));
    CHECK(m.predict_sign(x) == 1);

    FeatureVector out_of_range;
    out_of_range.entries.emplace_back(4u, 1.0);
    CHECK_THROWS_AS(m.predict_score(out_of_range), std::invalid_argument);
}

TEST_CASE("assignment flips the predicted label") {
    LinearModel m{{1.0}, 0.0};
    FeatureVector pos = oracles::dense_features({2.0});
    FeatureVector neg = oracles::dense_features({-2.0});
    SignedClassifier plus{m, 1}, minus{m, -1};
    CHECK(plus.predict_label(pos) == 1);
    CHECK(plus.predict_label(neg) == -1);
    CHECK(minus.predict_label(pos) == -1);
    CHECK(minus.predict_label(neg) == 1);

    // zero score lands on the -1 side, so the assignment still flips it
    FeatureVector zero;
    CHECK(plus.predict_label(zero) == -1);
    CHECK(minus.predict_label(zero) == 1);
}

TEST_CASE("loss values match their closed forms") {
    CHECK(loss_value(LossKind::logistic, 0.0, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(loss_value(LossKind::logistic, 0.0, -1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(loss_value(LossKind::hinge, 2.0, 1.0) == 0.0);
    CHECK(loss_value(LossKind::hinge, -0.5, 1.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(loss_value(LossKind::squared, -0.5, 1.0) == doctest::Approx(2.25).epsilon(1e-15));
    CHECK(loss_value(LossKind::unhinged, -0.5, 1.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(loss_value(LossKind::linear, -0.5, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("losses depend on z and t only through the margin z*t") {
    Rng rng(2);
    for (int i = 0; i < 200; ++i) {
        double z = rng.normal() * 3;
        for (LossKind kind : {LossKind::logistic, LossKind::hinge, LossKind::squared,
                              LossKind::unhinged, LossKind::linear}) {
            CHECK(loss_value(kind, z, -1.0) == loss_value(kind, -z, 1.0));
            CHECK(loss_derivative(kind, z, -1.0) == doctest::Approx(-loss_derivative(kind, -z, 1.0)));
        }
    }
}

TEST_CASE("loss derivatives match closed forms and finite differences") {
    CHECK(loss_derivative(LossKind::logistic, 0.0, 1.0) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(loss_derivative(LossKind::logistic, 0.0, -1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(loss_derivative(LossKind::unhinged, 17.0, 1.0) == -1.0);
    CHECK(loss_derivative(LossKind::linear, -17.0, 1.0) == -1.0);
    CHECK(loss_derivative(LossKind::hinge, 1.0, 1.0) == 0.0);  // kink convention
    CHECK(loss_derivative(LossKind::hinge, 0.999, 1.0) == -1.0);
    CHECK(loss_derivative(LossKind::hinge, 1.001, 1.0) == 0.0);

    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        double z = rng.normal() * 2;
        double t = rng.bernoulli(0.5) ? 1.0 : -1.0;
        for (LossKind kind : {LossKind::logistic, LossKind::squared, LossKind::unhinged,
                              LossKind::linear}) {
            double fd = oracles::central_difference(
                [&](double zz) { return loss_value(kind, zz, t); }, z, 1e-6);
            CHECK(loss_derivative(kind, z, t) == doctest::Approx(fd).epsilon(1e-6));
        }
        // hinge away from its kink
        if (std::fabs(z * t - 1.0) > 1e-3) {
            double fd = oracles::central_difference(
                [&](double zz) { return loss_value(LossKind::hinge, zz, t); }, z, 1e-6);
            CHECK(loss_derivative(LossKind::hinge, z, t) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("logistic loss stays finite and accurate at extreme margins") {
    CHECK(loss_value(LossKind::logistic, 1000.0, 1.0) == 0.0);
    CHECK(loss_value(LossKind::logistic, -1000.0, 1.0) == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(std::isfinite(loss_derivative(LossKind::logistic, 1000.0, 1.0)));
    CHECK(loss_derivative(LossKind::logistic, -1000.0, 1.0) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("loss names round-trip and unknown names are rejected") {
    for (LossKind kind : {LossKind::logistic, LossKind::hinge, LossKind::squared,
                          LossKind::unhinged, LossKind::linear})
        CHECK(loss_from_name(loss_name(kind)) == kind);
    CHECK_THROWS_AS(loss_from_name("ramp"), std::invalid_argument);
}

TEST_CASE("model files round-trip weights, bias, and assignment exactly") {
    Rng rng(4);
    LinearModel m;
    for (int i = 0; i < 17; ++i) m.weights.push_back(i % 5 == 0 ? 0.0 : rng.normal());
    m.bias = rng.normal();

    LinearModel back = parse_model(serialize_model(m));
    REQUIRE(back.weights.size() == m.weights.size());
    for (std::size_t i = 0; i < m.weights.size(); ++i) CHECK(back.weights[i] == m.weights[i]);
    CHECK(back.bias == m.bias);

    SignedClassifier clf{m, -1};
    SignedClassifier sback = parse_signed(serialize_signed(clf));
    CHECK(sback.assignment == -1);
    CHECK(sback.model.bias == m.bias);

    CHECK_THROWS_AS(parse_signed(serialize_model(m)), ParseError);  // assignment required
    CHECK_THROWS_AS(parse_model("bias 0\n"), ParseError);           // dim required
    CHECK_THROWS_AS(parse_model("dim 2\n5 1.0\n"), ParseError);     // index out of range
}
