#include "mibci/lda.hpp"

#include <string>

#include <Eigen/Cholesky>

#include "mibci/error.hpp"

namespace mibci {

LdaModel fit_lda(const Eigen::MatrixXd& features, std::span<const Label> labels) {
    const Eigen::Index n = features.rows();
    const Eigen::Index d = features.cols();
    if (d == 0) throw InvalidArgument("LDA needs at least one feature dimension");
    if (static_cast<std::size_t>(n) != labels.size()) {
        throw InvalidArgument("LDA needs one label per feature row");
    }

    Eigen::VectorXd sum_n = Eigen::VectorXd::Zero(d), sum_p = Eigen::VectorXd::Zero(d);
    int n_neg = 0, n_pos = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        switch (labels[i]) {
            case Label::kNeg: sum_n += features.row(i).transpose(); ++n_neg; break;
            case Label::kPos: sum_p += features.row(i).transpose(); ++n_pos; break;
            default: throw InvalidArgument("LDA training data contains unlabeled samples");
        }
    }
    if (n_neg < 2 || n_pos < 2) {
        throw InvalidArgument("LDA needs at least 2 samples of each class (got " +
                              std::to_string(n_neg) + " and " + std::to_string(n_pos) + ")");
    }
    const Eigen::VectorXd mu_n = sum_n / n_neg;
    const Eigen::VectorXd mu_p = sum_p / n_pos;

    Eigen::MatrixXd centered(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        centered.row(i) = features.row(i) - (labels[i] == Label::kNeg ? mu_n : mu_p).transpose();
    }
    Eigen::MatrixXd sw = centered.transpose() * centered;
    const double tr = sw.trace();
    const double ridge = tr > 0.0 ? kLdaShrinkage * tr / static_cast<double>(d) : 1.0;
    sw.diagonal().array() += ridge;

    LdaModel model;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(sw);
    model.w = ldlt.solve(mu_p - mu_n);
    if (ldlt.info() != Eigen::Success || !model.w.allFinite()) {
        throw NumericalError("within-class scatter could not be inverted");
    }
    if (model.w.cwiseAbs().maxCoeff() == 0.0) {
        throw NumericalError("class means coincide; LDA direction undefined");
    }
    model.b = -model.w.dot(mu_p + mu_n) / 2.0;
    return model;
}

LdaModel fit_lda(std::span<const FeatureVector> features, std::span<const Label> labels) {
    if (features.empty()) throw InvalidArgument("LDA needs training samples");
    return fit_lda(stack_rows(features), labels);
}

double lda_score(const LdaModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != model.w.size()) {
        throw InvalidArgument("feature dimension " + std::to_string(x.size()) +
                              " does not match LDA dimension " + std::to_string(model.w.size()));
    }
    return model.w.dot(x) + model.b;
}

Label lda_predict(const LdaModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
    return sign_label(lda_score(model, x));
}

}  // namespace mibci
