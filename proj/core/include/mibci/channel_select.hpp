#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "mibci/trial.hpp"

namespace mibci {

/// Fisher criterion per channel: (mu_neg - mu_pos)^2 / (var_neg + var_pos)
/// with sample variances. `values` is trials x channels. Zero pooled
/// variance gives +infinity when the means differ and 0 when they agree.
/// Throws InvalidArgument if either class has fewer than 2 trials.
Eigen::VectorXd fisher_scores(const Eigen::MatrixXd& values, std::span<const Label> labels);

/// Indices of the n best scores, best first; ties go to the lower index.
std::vector<int> select_channels(const Eigen::VectorXd& scores, int n);

/// Per-channel log variance of a (band-passed) trial: the AR scoring summary.
Eigen::VectorXd log_band_power(const Trial& trial);

}  // namespace mibci
