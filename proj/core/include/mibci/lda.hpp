#pragma once

#include <span>

#include <Eigen/Core>

#include "mibci/feature.hpp"
#include "mibci/trial.hpp"

namespace mibci {

/// Relative ridge added to the within-class scatter: gamma * trace(S_w) / d.
inline constexpr double kLdaShrinkage = 1e-6;

/// Fisher discriminant hyperplane; score = w^T x + b, positive for class +1.
struct LdaModel {
    Eigen::VectorXd w;
    double b = 0.0;
};

/// Rows of `features` are samples. Needs >= 2 samples per class.
LdaModel fit_lda(const Eigen::MatrixXd& features, std::span<const Label> labels);
LdaModel fit_lda(std::span<const FeatureVector> features, std::span<const Label> labels);

double lda_score(const LdaModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
/// Sign of the score; exactly zero maps to +1.
Label lda_predict(const LdaModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

inline Label sign_label(double score) noexcept { return score >= 0.0 ? Label::kPos : Label::kNeg; }

}  // namespace mibci
