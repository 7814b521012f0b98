#include "mibci/lrp.hpp"

#include <string>

#include "mibci/error.hpp"

namespace mibci {

FeatureVector lrp_feature(const Trial& trial, double fs_hz, std::span<const int> channels,
                          const TimeWindow& window) {
    if (channels.empty()) throw InvalidArgument("LRP feature needs at least one channel");
    const SampleRange r = window_samples(window, fs_hz, trial.samples());
    FeatureVector f{Eigen::VectorXd(static_cast<Eigen::Index>(channels.size())), FeatureMethod::kLrp};
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const int c = channels[i];
        if (c < 0 || c >= trial.channels()) {
            throw InvalidArgument("channel index " + std::to_string(c) + " out of range");
        }
        f.values(static_cast<Eigen::Index>(i)) = trial.data.row(c).segment(r.first, r.count).mean();
    }
    return f;
}

}  // namespace mibci
