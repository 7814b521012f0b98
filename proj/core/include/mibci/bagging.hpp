#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mibci/lda.hpp"

namespace mibci {

inline constexpr int kDefaultBaggingRounds = 50;
inline constexpr double kDefaultSubsetFraction = 0.5;
/// Resample attempts per round before a degenerate training set is reported.
inline constexpr int kMaxRedraws = 100;

struct BaggingEnsemble {
    std::vector<LdaModel> components;
    double subset_fraction = kDefaultSubsetFraction;
    int rounds = kDefaultBaggingRounds;
    std::uint64_t seed = 0;
};

/// Indices of one bootstrap draw: ceil(fraction * n) samples with
/// replacement from a stream seeded by (seed, round), redrawn while either
/// class has fewer than 2 members. Throws NumericalError after kMaxRedraws.
std::vector<std::size_t> bootstrap_draw(std::span<const Label> labels, double subset_fraction,
                                        std::uint64_t seed, int round);

/// One LDA per round on its bootstrap draw. Each round owns its random stream,
/// so the result does not depend on the order rounds are fitted in.
BaggingEnsemble fit_bagging(const Eigen::MatrixXd& features, std::span<const Label> labels,
                            int rounds = kDefaultBaggingRounds,
                            double subset_fraction = kDefaultSubsetFraction,
                            std::uint64_t seed = 0);

struct VoteTally {
    int neg = 0;
    int pos = 0;
    double mean_score = 0.0;
};

VoteTally bagging_votes(const BaggingEnsemble& ensemble, const Eigen::Ref<const Eigen::VectorXd>& x);
/// Majority vote; a tie goes to the sign of the mean component score (0 -> +1).
Label bagging_predict(const BaggingEnsemble& ensemble, const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace mibci
