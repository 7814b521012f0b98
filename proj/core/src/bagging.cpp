#include "mibci/bagging.hpp"

#include <cmath>
#include <random>
#include <string>

#include "mibci/error.hpp"

namespace mibci {

std::vector<std::size_t> bootstrap_draw(std::span<const Label> labels, double subset_fraction,
                                        std::uint64_t seed, int round) {
    if (!(subset_fraction > 0.0 && subset_fraction <= 1.0)) {
        throw InvalidArgument("bagging subset fraction must lie in (0, 1]");
    }
    const std::size_t n = labels.size();
    if (n == 0) throw InvalidArgument("bagging needs training samples");
    const auto draw_size = static_cast<std::size_t>(
        std::ceil(subset_fraction * static_cast<double>(n) - 1e-9));

    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(round)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);

    std::vector<std::size_t> idx(draw_size);
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
        int n_neg = 0, n_pos = 0;
        for (auto& i : idx) {
            i = pick(rng);
            if (labels[i] == Label::kNeg) ++n_neg;
            if (labels[i] == Label::kPos) ++n_pos;
        }
        if (n_neg >= 2 && n_pos >= 2) return idx;
    }
    throw NumericalError("bagging round " + std::to_string(round) + ": " +
                         std::to_string(kMaxRedraws) +
                         " consecutive resamples lacked two samples of each class");
}

BaggingEnsemble fit_bagging(const Eigen::MatrixXd& features, std::span<const Label> labels,
                            int rounds, double subset_fraction, std::uint64_t seed) {
    if (rounds < 1) throw InvalidArgument("bagging needs at least one round");
    if (static_cast<std::size_t>(features.rows()) != labels.size()) {
        throw InvalidArgument("bagging needs one label per feature row");
    }
    BaggingEnsemble e;
    e.subset_fraction = subset_fraction;
    e.rounds = rounds;
    e.seed = seed;
    e.components.reserve(static_cast<std::size_t>(rounds));

    std::vector<Label> sub_labels;
    for (int r = 0; r < rounds; ++r) {
        const auto idx = bootstrap_draw(labels, subset_fraction, seed, r);
        Eigen::MatrixXd sub(static_cast<Eigen::Index>(idx.size()), features.cols());
        sub_labels.resize(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) {
            sub.row(static_cast<Eigen::Index>(k)) = features.row(static_cast<Eigen::Index>(idx[k]));
            sub_labels[k] = labels[idx[k]];
        }
        e.components.push_back(fit_lda(sub, sub_labels));
    }
    return e;
}

VoteTally bagging_votes(const BaggingEnsemble& ensemble, const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (ensemble.components.empty()) throw InvalidArgument("ensemble has no components");
    VoteTally t;
    double total = 0.0;
    for (const LdaModel& m : ensemble.components) {
        const double s = lda_score(m, x);
        total += s;
        (s >= 0.0 ? t.pos : t.neg) += 1;
    }
    t.mean_score = total / static_cast<double>(ensemble.components.size());
    return t;
}

Label bagging_predict(const BaggingEnsemble& ensemble, const Eigen::Ref<const Eigen::VectorXd>& x) {
    const VoteTally t = bagging_votes(ensemble, x);
    if (t.pos != t.neg) return t.pos > t.neg ? Label::kPos : Label::kNeg;
    return sign_label(t.mean_score);
}

}  // namespace mibci
