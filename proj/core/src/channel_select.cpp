#include "mibci/channel_select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mibci/error.hpp"

namespace mibci {

Eigen::VectorXd fisher_scores(const Eigen::MatrixXd& values, std::span<const Label> labels) {
    if (static_cast<std::size_t>(values.rows()) != labels.size()) {
        throw InvalidArgument("fisher_scores: one label per row required");
    }
    const Eigen::Index c = values.cols();
    Eigen::VectorXd sum_n = Eigen::VectorXd::Zero(c), sum_p = Eigen::VectorXd::Zero(c);
    int n_neg = 0, n_pos = 0;
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        if (labels[i] == Label::kNeg) {
            sum_n += values.row(i).transpose();
            ++n_neg;
        } else if (labels[i] == Label::kPos) {
            sum_p += values.row(i).transpose();
            ++n_pos;
        } else {
            throw InvalidArgument("fisher_scores: unlabeled trial");
        }
    }
    if (n_neg < 2 || n_pos < 2) {
        throw InvalidArgument("fisher_scores needs at least 2 trials per class");
    }
    const Eigen::VectorXd mu_n = sum_n / n_neg;
    const Eigen::VectorXd mu_p = sum_p / n_pos;
    Eigen::VectorXd ss_n = Eigen::VectorXd::Zero(c), ss_p = Eigen::VectorXd::Zero(c);
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        if (labels[i] == Label::kNeg) {
            ss_n += (values.row(i).transpose() - mu_n).cwiseAbs2();
        } else {
            ss_p += (values.row(i).transpose() - mu_p).cwiseAbs2();
        }
    }
    Eigen::VectorXd scores(c);
    for (Eigen::Index k = 0; k < c; ++k) {
        const double diff = mu_n(k) - mu_p(k);
        const double pooled = ss_n(k) / (n_neg - 1) + ss_p(k) / (n_pos - 1);
        if (pooled > 0.0) {
            scores(k) = diff * diff / pooled;
        } else {
            scores(k) = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        }
    }
    return scores;
}

std::vector<int> select_channels(const Eigen::VectorXd& scores, int n) {
    if (n <= 0) throw InvalidArgument("must select at least one channel");
    if (n > scores.size()) {
        throw InvalidArgument("cannot select " + std::to_string(n) + " of " +
                              std::to_string(scores.size()) + " channels");
    }
    std::vector<int> idx(static_cast<std::size_t>(scores.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return scores(a) > scores(b); });
    idx.resize(static_cast<std::size_t>(n));
    return idx;
}

Eigen::VectorXd log_band_power(const Trial& trial) {
    Eigen::VectorXd out(trial.channels());
    for (Eigen::Index c = 0; c < trial.channels(); ++c) {
        const auto row = trial.data.row(c);
        const double mean = row.mean();
        const double var = (row.array() - mean).square().sum() / static_cast<double>(row.size() - 1);
        if (!(var > 0.0)) throw NumericalError("channel " + std::to_string(c) + " has zero power");
        out(c) = std::log(var);
    }
    return out;
}

}  // namespace mibci
