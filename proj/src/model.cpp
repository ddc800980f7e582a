#include "pairelicit/model.hpp"

#include <cmath>
#include <sstream>

#include "pairelicit/common.hpp"

namespace pairelicit {

double LinearModel::predict_score(const FeatureVector& x) const {
    double s = bias;
    for (const auto& [idx, val] : x.entries) {
        if (idx > weights.size())
            throw std::invalid_argument("predict_score: feature index " + std::to_string(idx) +
                                        " exceeds model dim " + std::to_string(weights.size()));
        s += weights[idx - 1] * val;
    }
    return s;
}

LinearModel LinearModel::negated() const {
    LinearModel out;
    out.weights.reserve(weights.size());
    for (double w : weights) out.weights.push_back(-w);
    out.bias = -bias;
    return out;
}

double loss_value(LossKind kind, double z, double t) {
    const double m = z * t;
    switch (kind) {
        case LossKind::logistic:
            // log(1 + e^-m) without overflow for large |m|.
            return std::log1p(std::exp(-std::fabs(m))) + std::max(0.0, -m);
        case LossKind::hinge:
            return std::max(0.0, 1.0 - m);
        case LossKind::squared:
            return (1.0 - m) * (1.0 - m);
        case LossKind::unhinged:
            return 1.0 - m;
        case LossKind::linear:
            return -m;
    }
    return 0.0;
}

double loss_derivative(LossKind kind, double z, double t) {
    const double m = z * t;
    switch (kind) {
        case LossKind::logistic: {
            // -t * sigma(-m), evaluated on the side that cannot overflow.
            if (m >= 0) {
                double e = std::exp(-m);
                return -t * e / (1.0 + e);
            }
            return -t / (1.0 + std::exp(m));
        }
        case LossKind::hinge:
            return m < 1.0 ? -t : 0.0;
        case LossKind::squared:
            return -2.0 * t * (1.0 - m);
        case LossKind::unhinged:
        case LossKind::linear:
            return -t;
    }
    return 0.0;
}

LossKind loss_from_name(const std::string& name) {
    if (name == "logistic") return LossKind::logistic;
    if (name == "hinge") return LossKind::hinge;
    if (name == "squared") return LossKind::squared;
    if (name == "unhinged") return LossKind::unhinged;
    if (name == "linear") return LossKind::linear;
    throw std::invalid_argument("unknown loss '" + name + "'");
}

std::string loss_name(LossKind kind) {
    switch (kind) {
        case LossKind::logistic: return "logistic";
        case LossKind::hinge: return "hinge";
        case LossKind::squared: return "squared";
        case LossKind::unhinged: return "unhinged";
        case LossKind::linear: return "linear";
    }
    return "?";
}

namespace {

std::string serialize_body(const LinearModel& model, const int* assignment) {
    std::string out = "dim " + std::to_string(model.weights.size()) + "\n";
    out += "bias " + format_double(model.bias) + "\n";
    if (assignment) out += std::string("assignment ") + (*assignment > 0 ? "+1" : "-1") + "\n";
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
        if (model.weights[i] == 0.0) continue;
        out += std::to_string(i + 1) + " " + format_double(model.weights[i]) + "\n";
    }
    return out;
}

struct ParsedModel {
    LinearModel model;
    std::optional<int> assignment;
};

ParsedModel parse_body(const std::string& text) {
    ParsedModel out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool have_dim = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key, value;
        if (!(ls >> key >> value)) throw ParseError(line_no, "expected '<key> <value>'");
        bool ok = false;
        if (key == "dim") {
            double d = parse_double(value, ok);
            if (!ok || d < 0 || d != std::floor(d)) throw ParseError(line_no, "bad dim");
            out.model.weights.assign(static_cast<std::size_t>(d), 0.0);
            have_dim = true;
        } else if (key == "bias") {
            out.model.bias = parse_double(value, ok);
            if (!ok) throw ParseError(line_no, "bad bias");
        } else if (key == "assignment") {
            if (value != "+1" && value != "-1") throw ParseError(line_no, "assignment must be +1 or -1");
            out.assignment = value == "+1" ? 1 : -1;
        } else {
            if (!have_dim) throw ParseError(line_no, "weight line before dim");
            double idx = parse_double(key, ok);
            if (!ok || idx < 1 || idx != std::floor(idx) ||
                idx > static_cast<double>(out.model.weights.size()))
                throw ParseError(line_no, "bad weight index '" + key + "'");
            double w = parse_double(value, ok);
            if (!ok) throw ParseError(line_no, "bad weight value");
            out.model.weights[static_cast<std::size_t>(idx) - 1] = w;
        }
    }
    if (!have_dim) throw ParseError(1, "model file missing dim");
    return out;
}

}  // namespace

std::string serialize_model(const LinearModel& model) { return serialize_body(model, nullptr); }

LinearModel parse_model(const std::string& text) { return parse_body(text).model; }

std::string serialize_signed(const SignedClassifier& clf) {
    return serialize_body(clf.model, &clf.assignment);
}

SignedClassifier parse_signed(const std::string& text) {
    ParsedModel parsed = parse_body(text);
    if (!parsed.assignment) throw ParseError(1, "signed classifier file missing assignment");
    return {std::move(parsed.model), *parsed.assignment};
}

}  // namespace pairelicit
