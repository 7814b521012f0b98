#pragma once

#include <span>

#include "mibci/feature.hpp"
#include "mibci/preprocess.hpp"
#include "mibci/trial.hpp"

namespace mibci {

/// Mean of each listed channel over `window` (expects a low-passed,
/// baseline-corrected trial).
FeatureVector lrp_feature(const Trial& trial, double fs_hz, std::span<const int> channels,
                          const TimeWindow& window);

}  // namespace mibci
