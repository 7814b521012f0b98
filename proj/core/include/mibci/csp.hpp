#pragma once

#include <span>

#include <Eigen/Core>

#include "mibci/feature.hpp"
#include "mibci/trial.hpp"

namespace mibci {

/// Fitted common spatial patterns.
///
/// `filters` has 2m rows over the channels: the first m maximise class -1
/// variance (hand), the last m maximise class +1 variance (foot).
/// `eigenvalues` holds each filter's class -1 share of projected variance,
/// descending. On the training covariances the filters satisfy
/// F (S_neg + S_pos) F^T = I and F S_neg F^T = diag(eigenvalues).
struct CspModel {
    Eigen::MatrixXd filters;
    Eigen::VectorXd eigenvalues;
    int m = 1;
};

/// Scatter X X^T, channel sums and sample count of one trial. Enough to
/// compute both the trace-normalised covariance and any projected variance.
struct TrialMoments {
    Eigen::MatrixXd scatter;
    Eigen::VectorXd sum;
    Eigen::Index n = 0;

    TrialMoments& operator+=(const TrialMoments& o);
    /// Moments restricted to a subset of channels.
    [[nodiscard]] TrialMoments select(std::span<const int> channels) const;
};

TrialMoments moments(const Signal& x);
TrialMoments moments(const Signal& x, Eigen::Index first_sample, Eigen::Index count);

/// Mean over trials of X X^T / trace(X X^T).
Eigen::MatrixXd mean_normalized_covariance(std::span<const TrialMoments> trials);

/// Simultaneous diagonalisation of the two class covariances. Throws
/// NumericalError if the composite covariance has an eigenvalue below 1e-10
/// times its largest, InvalidArgument on empty classes, mismatched channel
/// counts or 2m > channels.
CspModel fit_csp(std::span<const Trial> class_neg, std::span<const Trial> class_pos, int m);
CspModel fit_csp(std::span<const TrialMoments> class_neg, std::span<const TrialMoments> class_pos,
                 int m);
/// Same decomposition from precomputed class covariances.
CspModel fit_csp_covariances(const Eigen::MatrixXd& cov_neg, const Eigen::MatrixXd& cov_pos, int m);

/// log(var_h / (var_h + var_f)); throws NumericalError on zero total variance.
double log_variance_ratio(double var_h, double var_f);

/// Projects the trial through both filter blocks and returns the one-element
/// log-variance-ratio feature. Variances are summed over the m rows of a block.
FeatureVector csp_feature(const CspModel& model, const Trial& trial);
/// Same value computed from moments.
double csp_feature(const CspModel& model, const TrialMoments& mom);

}  // namespace mibci
