#include "mibci/csp.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "mibci/error.hpp"

namespace mibci {
namespace {

constexpr double kRankTolerance = 1e-10;

double sample_variance(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
    const double mean = row.mean();
    return (row.array() - mean).square().sum() / static_cast<double>(row.size() - 1);
}

// Sample covariance of the trial from its moments.
Eigen::MatrixXd centered_covariance(const TrialMoments& mom) {
    const double n = static_cast<double>(mom.n);
    return (mom.scatter - mom.sum * mom.sum.transpose() / n) / (n - 1.0);
}

}  // namespace

TrialMoments& TrialMoments::operator+=(const TrialMoments& o) {
    scatter += o.scatter;
    sum += o.sum;
    n += o.n;
    return *this;
}

TrialMoments TrialMoments::select(std::span<const int> channels) const {
    const auto k = static_cast<Eigen::Index>(channels.size());
    TrialMoments out{Eigen::MatrixXd(k, k), Eigen::VectorXd(k), n};
    for (Eigen::Index i = 0; i < k; ++i) {
        out.sum(i) = sum(channels[i]);
        for (Eigen::Index j = 0; j < k; ++j) out.scatter(i, j) = scatter(channels[i], channels[j]);
    }
    return out;
}

TrialMoments moments(const Signal& x) { return moments(x, 0, x.cols()); }

TrialMoments moments(const Signal& x, Eigen::Index first_sample, Eigen::Index count) {
    const auto block = x.middleCols(first_sample, count);
    TrialMoments m;
    m.scatter = block * block.transpose();
    m.sum = block.rowwise().sum();
    m.n = count;
    return m;
}

Eigen::MatrixXd mean_normalized_covariance(std::span<const TrialMoments> trials) {
    if (trials.empty()) throw InvalidArgument("cannot average covariances of zero trials");
    const Eigen::Index c = trials.front().scatter.rows();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(c, c);
    for (const TrialMoments& t : trials) {
        if (t.scatter.rows() != c) throw InvalidArgument("trials have mismatched channel counts");
        const double tr = t.scatter.trace();
        if (!(tr > 0.0)) throw NumericalError("trial has zero signal energy");
        acc += t.scatter / tr;
    }
    return acc / static_cast<double>(trials.size());
}

CspModel fit_csp_covariances(const Eigen::MatrixXd& cov_neg, const Eigen::MatrixXd& cov_pos, int m) {
    const Eigen::Index c = cov_neg.rows();
    if (cov_pos.rows() != c) throw InvalidArgument("class covariances have mismatched channel counts");
    if (m < 1 || 2 * m > c) {
        throw InvalidArgument("CSP needs 1 <= m and 2m <= channels (m = " + std::to_string(m) +
                              ", channels = " + std::to_string(c) + ")");
    }

    const Eigen::MatrixXd composite = cov_neg + cov_pos;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> comp(composite);
    const Eigen::VectorXd d = comp.eigenvalues();
    if (!(d.minCoeff() > kRankTolerance * d.maxCoeff())) {
        throw NumericalError("composite covariance is rank deficient (smallest eigenvalue " +
                             std::to_string(d.minCoeff()) + ", largest " +
                             std::to_string(d.maxCoeff()) + ")");
    }
    const Eigen::MatrixXd whiten =
        d.cwiseSqrt().cwiseInverse().asDiagonal() * comp.eigenvectors().transpose();

    Eigen::MatrixXd s = whiten * cov_neg * whiten.transpose();
    s = 0.5 * (s + s.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    // Ascending from Eigen; reverse to descending.
    const Eigen::MatrixXd all = es.eigenvectors().rowwise().reverse().transpose() * whiten;
    const Eigen::VectorXd lambda = es.eigenvalues().reverse();

    CspModel model;
    model.m = m;
    model.filters.resize(2 * m, c);
    model.eigenvalues.resize(2 * m);
    for (int i = 0; i < m; ++i) {
        model.filters.row(i) = all.row(i);
        model.eigenvalues(i) = lambda(i);
        model.filters.row(m + i) = all.row(c - m + i);
        model.eigenvalues(m + i) = lambda(c - m + i);
    }
    for (Eigen::Index r = 0; r < model.filters.rows(); ++r) {
        Eigen::Index at = 0;
        model.filters.row(r).cwiseAbs().maxCoeff(&at);
        if (model.filters(r, at) < 0.0) model.filters.row(r) *= -1.0;
    }
    return model;
}

CspModel fit_csp(std::span<const TrialMoments> class_neg, std::span<const TrialMoments> class_pos,
                 int m) {
    if (class_neg.empty() || class_pos.empty()) {
        throw InvalidArgument("CSP needs trials of both classes");
    }
    return fit_csp_covariances(mean_normalized_covariance(class_neg),
                               mean_normalized_covariance(class_pos), m);
}

CspModel fit_csp(std::span<const Trial> class_neg, std::span<const Trial> class_pos, int m) {
    if (class_neg.empty() || class_pos.empty()) {
        throw InvalidArgument("CSP needs trials of both classes");
    }
    auto collect = [](std::span<const Trial> trials) {
        std::vector<TrialMoments> out;
        out.reserve(trials.size());
        for (const Trial& t : trials) out.push_back(moments(t.data));
        return out;
    };
    const auto neg = collect(class_neg);
    const auto pos = collect(class_pos);
    return fit_csp(neg, pos, m);
}

double log_variance_ratio(double var_h, double var_f) {
    const double total = var_h + var_f;
    if (!(total > 0.0)) throw NumericalError("projected signals have zero total variance");
    return std::log(var_h / total);
}

FeatureVector csp_feature(const CspModel& model, const Trial& trial) {
    if (trial.channels() != model.filters.cols()) {
        throw InvalidArgument("trial channel count does not match the CSP model");
    }
    const Eigen::MatrixXd projected = model.filters * trial.data;
    double var_h = 0.0;
    double var_f = 0.0;
    for (int i = 0; i < model.m; ++i) {
        var_h += sample_variance(projected.row(i));
        var_f += sample_variance(projected.row(model.m + i));
    }
    FeatureVector f{Eigen::VectorXd(1), FeatureMethod::kCsp};
    f.values(0) = log_variance_ratio(var_h, var_f);
    return f;
}

double csp_feature(const CspModel& model, const TrialMoments& mom) {
    if (mom.scatter.rows() != model.filters.cols()) {
        throw InvalidArgument("trial channel count does not match the CSP model");
    }
    const Eigen::MatrixXd cov = centered_covariance(mom);
    const Eigen::VectorXd v = (model.filters * cov).cwiseProduct(model.filters).rowwise().sum();
    return log_variance_ratio(v.head(model.m).sum(), v.tail(model.m).sum());
}

}  // namespace mibci
