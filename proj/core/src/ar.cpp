#include "mibci/ar.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "mibci/error.hpp"

namespace mibci {

Eigen::VectorXd autocovariance(std::span<const double> series, int max_lag) {
    const auto n = series.size();
    if (max_lag < 0 || static_cast<std::size_t>(max_lag) >= n) {
        throw InvalidArgument("autocovariance lag out of range");
    }
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = series[i] - mean;

    Eigen::VectorXd r(max_lag + 1);
    for (int k = 0; k <= max_lag; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i + static_cast<std::size_t>(k) < n; ++i) acc += c[i] * c[i + k];
        r(k) = acc / static_cast<double>(n);
    }
    return r;
}

ArCoefficients yule_walker(std::span<const double> autocov, int p) {
    if (p < 1) throw InvalidArgument("AR order must be >= 1");
    if (autocov.size() < static_cast<std::size_t>(p) + 1) {
        throw InvalidArgument("need autocovariances r(0..p)");
    }
    const double r0 = autocov[0];
    if (!(r0 > 0.0)) throw NumericalError("zero-variance series has no AR model");

    // phi holds the predictor x(n) ~ sum phi_k x(n-k).
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd prev(p);
    double err = r0;
    for (int k = 1; k <= p; ++k) {
        double acc = autocov[k];
        for (int j = 1; j < k; ++j) acc -= phi(j - 1) * autocov[k - j];
        const double kappa = acc / err;
        prev = phi;
        for (int j = 1; j < k; ++j) phi(j - 1) = prev(j - 1) - kappa * prev(k - j - 1);
        phi(k - 1) = kappa;
        err *= 1.0 - kappa * kappa;
        if (!(err > 1e-12 * r0)) {
            throw NumericalError("singular autocovariance system at order " + std::to_string(k));
        }
    }
    return {-phi, err};
}

ArCoefficients fit_ar(std::span<const double> series, int p) {
    if (p < 1) throw InvalidArgument("AR order must be >= 1");
    if (series.size() <= static_cast<std::size_t>(10 * p)) {
        throw InvalidArgument("AR(" + std::to_string(p) + ") needs more than " +
                              std::to_string(10 * p) + " samples, got " +
                              std::to_string(series.size()));
    }
    const Eigen::VectorXd r = autocovariance(series, p);
    if (!(r(0) > 0.0)) throw NumericalError("constant series has no AR model");
    return yule_walker({r.data(), static_cast<std::size_t>(r.size())}, p);
}

FeatureVector ar_feature(const Trial& trial, std::span<const int> channels, int p) {
    if (channels.empty()) throw InvalidArgument("AR feature needs at least one channel");
    FeatureVector f{Eigen::VectorXd(static_cast<Eigen::Index>(channels.size()) * (p + 1)),
                    FeatureMethod::kAr};
    const auto n = static_cast<std::size_t>(trial.samples());
    Eigen::Index at = 0;
    for (int c : channels) {
        if (c < 0 || c >= trial.channels()) {
            throw InvalidArgument("channel index " + std::to_string(c) + " out of range");
        }
        ArCoefficients ar;
        try {
            ar = fit_ar({trial.data.row(c).data(), n}, p);
        } catch (const NumericalError& e) {
            throw NumericalError("channel " + std::to_string(c) + ": " + e.what());
        } catch (const InvalidArgument& e) {
            throw InvalidArgument("channel " + std::to_string(c) + ": " + e.what());
        }
        f.values.segment(at, p) = ar.a;
        f.values(at + p) = ar.noise_variance;
        at += p + 1;
    }
    return f;
}

}  // namespace mibci
