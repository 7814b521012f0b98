#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mibci/config.hpp"
#include "mibci/trial.hpp"

namespace mibci {

inline constexpr int kPdfBins = 40;
/// Candidates whose test predictions are more unbalanced than this are
/// infeasible.
inline constexpr double kBalanceGate = 0.15;

/// Normalised histogram of classifier outputs over equal-width bins.
struct PdfEstimate {
    std::array<double, kPdfBins + 1> bin_edges{};
    std::array<double, kPdfBins> mass{};
};

/// Scores outside [lo, hi] are clipped into the end bins. Throws
/// InvalidArgument on empty scores or hi <= lo.
PdfEstimate estimate_pdf(std::span<const double> scores, double lo, double hi);

/// |P(score >= 0) - 0.5|; a zero score counts as class +1.
double class_balance_penalty(std::span<const double> scores);

/// Pearson correlation of the bin masses. Throws InvalidArgument if the bin
/// edges differ and CriterionUndefined if either histogram is flat.
double pdf_correlation(const PdfEstimate& train, const PdfEstimate& test);

struct CandidateResult {
    Band band;
    TimeWindow window;
    std::vector<int> channels;  // empty = all
    int m = 1;
    std::optional<double> rho;
    std::optional<double> penalty;
    bool feasible = false;
    std::string error;
};

struct SearchResult {
    /// `base` with the winning band, window, channels and m in its CSP chain.
    PipelineConfig config;
    double rho = 0.0;
    double balance_penalty = 0.0;
    std::size_t winner = 0;
    std::vector<CandidateResult> table;
};

/// Transductive CSP parameter selection. For every candidate (bands outer,
/// then windows, channel sets, m) both sets are band-passed and cropped, CSP
/// + LDA is fit on `train` and scores the test set. Training-side scores are
/// that model's outputs on its own training trials by default, so a band
/// that only separates the training set through overfitting shows up as a
/// train/test pdf mismatch; `space.train_scoring` switches to out-of-fold
/// scores. The 40-bin pdfs of both share the pooled
/// score range. Candidates with penalty <= kBalanceGate are feasible and the
/// one with the largest correlation wins; with none feasible the largest
/// rho - penalty wins. Ties go to the earlier candidate. Labels of
/// `test_unlabeled` are never read.
///
/// Throws InvalidArgument on bad inputs and NumericalError listing every
/// candidate's failure if none could be scored.
SearchResult grid_search(const TrialSet& train, const TrialSet& test_unlabeled,
                         const SearchSpace& space, const PipelineConfig& base);

}  // namespace mibci
