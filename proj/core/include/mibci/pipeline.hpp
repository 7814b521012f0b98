#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mibci/bagging.hpp"
#include "mibci/config.hpp"
#include "mibci/csp.hpp"
#include "mibci/param_select.hpp"
#include "mibci/split.hpp"
#include "mibci/trial.hpp"

namespace mibci {

/// 2x2 confusion counts, indexed by (true, predicted).
struct Confusion {
    int neg_as_neg = 0;
    int neg_as_pos = 0;
    int pos_as_neg = 0;
    int pos_as_pos = 0;
    [[nodiscard]] int total() const noexcept { return neg_as_neg + neg_as_pos + pos_as_neg + pos_as_pos; }
};

struct Evaluation {
    double accuracy = 0.0;  // percent
    Confusion confusion;
};

/// Throws InvalidArgument on length mismatch, empty input or unlabeled entries.
Evaluation evaluate(std::span<const Label> predicted, std::span<const Label> truth);

/// Trial-wise preprocessing of a set for one config. Holds everything the
/// fitted stages need, so folds can be refit without filtering again.
struct PreparedSet {
    std::vector<TrialMoments> csp;         // CSP chain, cropped, channel subset
    std::vector<Eigen::MatrixXd> ar_coef;  // per trial: candidate channel x (p + 1)
    Eigen::MatrixXd ar_power;              // trials x candidate channels, log power
    Eigen::MatrixXd lrp_means;             // trials x candidate channels
    std::vector<int> ar_candidates;        // channel ids behind the AR columns
    std::vector<int> lrp_candidates;
};

PreparedSet prepare(const PipelineConfig& cfg, const TrialSet& set);

/// Label-dependent feature stages fitted on a training subset.
struct FittedFeatures {
    std::optional<CspModel> csp;
    std::vector<int> ar_channels;   // positions into PreparedSet::ar_candidates
    std::vector<int> lrp_channels;  // positions into PreparedSet::lrp_candidates
};

FittedFeatures fit_features(const PipelineConfig& cfg, const PreparedSet& prep,
                            std::span<const std::size_t> idx, std::span<const Label> labels);
/// One feature row per index, concatenated csp | ar | lrp for the combined method.
Eigen::MatrixXd extract(const PipelineConfig& cfg, const FittedFeatures& fitted,
                        const PreparedSet& prep, std::span<const std::size_t> idx);

struct TrainedModel {
    FittedFeatures features;
    BaggingEnsemble ensemble;
};

/// `labels[k]` belongs to trial `idx[k]`.
TrainedModel train_model(const PipelineConfig& cfg, const PreparedSet& prep,
                         std::span<const std::size_t> idx, std::span<const Label> labels);
std::vector<Label> predict(const PipelineConfig& cfg, const TrainedModel& model,
                           const PreparedSet& prep, std::span<const std::size_t> idx);

struct CvResult {
    double mean = 0.0;  // percent
    double std = 0.0;   // sample standard deviation across folds
    int folds = 0;
    std::vector<double> fold_accuracies;
};

/// Stratified k-fold cross-validation; every label-dependent stage is refit
/// inside each fold.
CvResult cross_validate(const TrialSet& train, const PipelineConfig& cfg, int folds = 10,
                        std::uint64_t seed = 0);

struct SessionReport {
    int session_id = 0;
    std::size_t n_trials = 0;
    std::size_t n_labeled = 0;
    std::size_t train_size = 0;
    std::optional<double> accuracy;
    PipelineConfig config;
    std::optional<double> rho;
    std::optional<double> penalty;
};

struct EvalReport {
    std::string mode;  // "static" or "adaptive"
    std::optional<CvResult> train_cv;
    std::optional<double> test_accuracy;
    Confusion confusion;
    std::vector<SessionReport> sessions;
    std::vector<Label> predicted;
    std::vector<int> predicted_sessions;
    std::optional<SearchResult> search;  // static mode only
};

/// Optional grid search on (train, unlabeled test), then features + bagging
/// on train and predictions for every test trial. Test labels are used only
/// to score the predictions.
EvalReport run_static(const TrialSet& train, const TrialSet& test, const PipelineConfig& cfg);

/// Session-by-session self-training. The initial split must lie inside the
/// first session; each later session is classified by a model trained on the
/// initial trials plus every earlier prediction (labels frozen once given),
/// with the grid search rerun before each session when configured.
EvalReport run_adaptive(const TrialSet& data, const SplitSpec& initial, const PipelineConfig& cfg);

struct SweepRow {
    std::string method;  // caller-chosen label
    double fraction = 0.0;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    double accuracy = 0.0;
};

/// run_static on a prefix split for every (method, fraction) pair; rows are
/// ordered methods outer, fractions inner. Test labels must be present.
std::vector<SweepRow> fraction_sweep(const TrialSet& data, std::span<const double> fractions,
                                     std::span<const std::pair<std::string, PipelineConfig>> methods);

}  // namespace mibci
