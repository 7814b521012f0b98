#pragma once

#include <span>
#include <string_view>

#include <Eigen/Core>

namespace mibci {

enum class FeatureMethod { kCsp, kAr, kLrp, kCombined };

std::string_view to_string(FeatureMethod m) noexcept;
/// Accepts "csp", "ar", "lrp", "combined".
FeatureMethod parse_method(std::string_view name);

struct FeatureVector {
    Eigen::VectorXd values;
    FeatureMethod method = FeatureMethod::kCsp;
};

/// Concatenates `parts` in order and tags the result kCombined.
FeatureVector combine_features(std::span<const FeatureVector> parts);

/// Stacks feature vectors as rows. All must share a dimension.
Eigen::MatrixXd stack_rows(std::span<const FeatureVector> features);

}  // namespace mibci
