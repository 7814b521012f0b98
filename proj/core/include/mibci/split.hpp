#pragma once

#include <utility>

#include "mibci/trial.hpp"

namespace mibci {

enum class SplitMode { kPrefix, kBySession };

struct SplitSpec {
    double train_fraction = 0.1;
    SplitMode mode = SplitMode::kPrefix;
};

/// Number of leading trials (prefix mode) or sessions (by-session mode) that
/// go to training: ceil(fraction * count), tolerant to binary rounding so that
/// 0.8 * 280 gives 224.
std::size_t train_count(double fraction, std::size_t count);

/// Partitions `set` into (train, test) in recording order. Throws
/// InvalidArgument when either side would be empty.
std::pair<TrialSet, TrialSet> split(const TrialSet& set, const SplitSpec& spec);

}  // namespace mibci
