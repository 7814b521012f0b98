#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mibci/ar.hpp"
#include "mibci/bagging.hpp"
#include "mibci/feature.hpp"
#include "mibci/preprocess.hpp"

namespace mibci {

struct EnsembleConfig {
    int rounds = kDefaultBaggingRounds;
    double subset_fraction = kDefaultSubsetFraction;
    std::uint64_t seed = 0;
};

/// Where the training-side scores of the pdf comparison come from.
enum class TrainScoring {
    kResubstitution,  // model fit on all training trials scores those same trials
    kCrossValidated,  // out-of-fold scores, min(10, smallest class) folds
};

/// Candidate grid for transductive parameter selection of the CSP chain.
struct SearchSpace {
    std::vector<Band> bands_hz;
    std::vector<TimeWindow> windows_s;
    /// Empty inner list means "all channels".
    std::vector<std::vector<int>> channel_sets;
    std::vector<int> m_values;
    TrainScoring train_scoring = TrainScoring::kResubstitution;
};

/// Per-method preprocessing used by the combined method.
struct MethodChains {
    PreprocessConfig csp;
    PreprocessConfig ar;
    PreprocessConfig lrp;
};

struct PipelineConfig {
    FeatureMethod method = FeatureMethod::kCsp;
    /// Chain for single-method pipelines.
    PreprocessConfig preprocess;
    /// Chains for the combined method.
    MethodChains chains;
    int m = 1;
    int ar_order = kDefaultArOrder;
    /// Channels kept by Fisher selection (AR, LRP).
    int n_channels = 2;
    /// Explicit channel list. CSP: restrict to these channels. AR/LRP: use
    /// these channels and skip Fisher selection. Empty = all / Fisher.
    std::vector<int> channels;
    EnsembleConfig ensemble;
    bool adapt = false;
    std::optional<SearchSpace> search;
    /// Folds for the training-set cross-validation column; 0 disables it.
    int cv_folds = 10;
};

/// Defaults for each chain: CSP 12-14 Hz on 0.5-4.5 s; AR CAR + 8-35 Hz
/// on 0.5-4.5 s; LRP 1.5 Hz low-pass, 0-0.5 s baseline, 0.5-1.5 s feature window.
PreprocessConfig default_preprocess(FeatureMethod method);
PipelineConfig default_config(FeatureMethod method);

/// The CSP chain of a config (the combined method's CSP chain, or preprocess).
const PreprocessConfig& csp_chain(const PipelineConfig& cfg);
PreprocessConfig& csp_chain(PipelineConfig& cfg);

/// Sliding 2 Hz bands from 8 to 30 Hz in 1 Hz steps plus 8-35 Hz (bands above
/// Nyquist dropped); windows 2-4 s long in 0.5 s steps sliding by 0.5 s
/// within the trial; all channels; m_values = {m}.
SearchSpace default_search_space(double trial_duration_s, double fs_hz, int m);

/// Throws InvalidArgument naming the offending field.
void validate(const PipelineConfig& cfg);
void validate(const SearchSpace& space);

/// JSON mirror of PipelineConfig. Missing fields take method defaults;
/// unknown fields are rejected.
PipelineConfig parse_pipeline_config(const std::string& json_text);
std::string to_json(const PipelineConfig& cfg);

}  // namespace mibci
