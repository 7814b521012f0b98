#include "mibci/feature.hpp"

#include <string>

#include "mibci/error.hpp"

namespace mibci {

std::string_view to_string(FeatureMethod m) noexcept {
    switch (m) {
        case FeatureMethod::kCsp: return "csp";
        case FeatureMethod::kAr: return "ar";
        case FeatureMethod::kLrp: return "lrp";
        case FeatureMethod::kCombined: return "combined";
    }
    return "unknown";
}

FeatureMethod parse_method(std::string_view name) {
    if (name == "csp") return FeatureMethod::kCsp;
    if (name == "ar") return FeatureMethod::kAr;
    if (name == "lrp") return FeatureMethod::kLrp;
    if (name == "combined") return FeatureMethod::kCombined;
    throw InvalidArgument("unknown feature method \"" + std::string(name) + "\"");
}

FeatureVector combine_features(std::span<const FeatureVector> parts) {
    if (parts.empty()) throw InvalidArgument("combine_features needs at least one part");
    Eigen::Index dim = 0;
    for (const auto& p : parts) dim += p.values.size();
    FeatureVector out{Eigen::VectorXd(dim), FeatureMethod::kCombined};
    Eigen::Index at = 0;
    for (const auto& p : parts) {
        out.values.segment(at, p.values.size()) = p.values;
        at += p.values.size();
    }
    return out;
}

Eigen::MatrixXd stack_rows(std::span<const FeatureVector> features) {
    if (features.empty()) return {};
    const Eigen::Index d = features.front().values.size();
    Eigen::MatrixXd x(static_cast<Eigen::Index>(features.size()), d);
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (features[i].values.size() != d) {
            throw InvalidArgument("feature vectors have inconsistent dimensions");
        }
        x.row(static_cast<Eigen::Index>(i)) = features[i].values.transpose();
    }
    return x;
}

}  // namespace mibci
