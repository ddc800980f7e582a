#pragma once

#include <string>
#include <vector>

#include "pairelicit/data.hpp"

namespace pairelicit {

// Sign convention used everywhere in this library: sign(a) = +1 for a > 0 and
// -1 otherwise, so sign(0) = -1. Ties in downstream decision rules inherit
// their behaviour from this single definition.
inline int sign_pm(double a) { return a > 0.0 ? 1 : -1; }

// Dense linear score f(x) = <w, x> + b over sparse inputs.
struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;

    std::size_t dim() const { return weights.size(); }
    double predict_score(const FeatureVector& x) const;
    int predict_sign(const FeatureVector& x) const { return sign_pm(predict_score(x)); }
    LinearModel negated() const;
};

// A model plus the class assignment chosen in the second stage. The final
// prediction is assignment * sign(f(x)).
struct SignedClassifier {
    LinearModel model;
    int assignment = 1;  // +1 or -1

    int predict_label(const FeatureVector& x) const {
        return assignment * model.predict_sign(x);
    }
};

enum class LossKind { logistic, hinge, squared, unhinged, linear };

// Margin losses ell(z, t) with t in {+1, -1}:
//   logistic  log(1 + exp(-zt))      (computed in overflow-safe form)
//   hinge     max(0, 1 - zt)
//   squared   (1 - zt)^2
//   unhinged  1 - zt
//   linear    -zt
double loss_value(LossKind kind, double z, double t);

// d/dz of loss_value. The hinge subgradient at its kink (zt == 1) is 0.
double loss_derivative(LossKind kind, double z, double t);

LossKind loss_from_name(const std::string& name);
std::string loss_name(LossKind kind);

// --- model file format ---
//
// Plain text: "dim <d>", "bias <b>", then one "<index> <value>" line per
// nonzero weight (1-based indices). Signed classifier files carry an extra
// "assignment +1|-1" line after the bias.
std::string serialize_model(const LinearModel& model);
LinearModel parse_model(const std::string& text);
std::string serialize_signed(const SignedClassifier& clf);
SignedClassifier parse_signed(const std::string& text);

}  // namespace pairelicit
