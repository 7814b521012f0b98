#pragma once

#include <span>

#include <Eigen/Core>

#include "mibci/feature.hpp"
#include "mibci/trial.hpp"

namespace mibci {

inline constexpr int kDefaultArOrder = 7;

/// AR(p) model in the convention x(n) = -sum_k a_k x(n-k) + u(n).
struct ArCoefficients {
    Eigen::VectorXd a;
    double noise_variance = 0.0;
};

/// Biased sample autocovariance r(0..max_lag) of the mean-removed series.
Eigen::VectorXd autocovariance(std::span<const double> series, int max_lag);

/// Levinson-Durbin solution of the Yule-Walker equations for r(0..p).
/// Throws NumericalError if the Toeplitz system is singular.
ArCoefficients yule_walker(std::span<const double> autocov, int p);

/// Requires series.size() > 10 p and nonzero variance.
ArCoefficients fit_ar(std::span<const double> series, int p);

/// Per listed channel, [a_1 .. a_p, sigma^2], concatenated in list order.
FeatureVector ar_feature(const Trial& trial, std::span<const int> channels, int p);

}  // namespace mibci
