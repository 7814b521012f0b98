#include "mibci/split.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "mibci/error.hpp"

namespace mibci {

std::size_t train_count(double fraction, std::size_t count) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw InvalidArgument("train fraction must lie in (0, 1], got " + std::to_string(fraction));
    }
    const double raw = fraction * static_cast<double>(count);
    return static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
}

std::pair<TrialSet, TrialSet> split(const TrialSet& set, const SplitSpec& spec) {
    std::size_t n_train = 0;
    if (spec.mode == SplitMode::kPrefix) {
        n_train = train_count(spec.train_fraction, set.size());
    } else {
        const std::vector<int> sessions = set.session_ids();
        const std::size_t n_sessions = train_count(spec.train_fraction, sessions.size());
        for (const Trial& t : set.trials()) {
            if (n_sessions == 0 || t.session_id > sessions[n_sessions - 1]) break;
            ++n_train;
        }
    }
    if (n_train == 0) throw InvalidArgument("split leaves the training set empty");
    if (n_train >= set.size()) throw InvalidArgument("split leaves the test set empty");

    std::vector<std::size_t> train_idx(n_train);
    std::iota(train_idx.begin(), train_idx.end(), std::size_t{0});
    std::vector<std::size_t> test_idx(set.size() - n_train);
    std::iota(test_idx.begin(), test_idx.end(), n_train);
    return {set.subset(train_idx), set.subset(test_idx)};
}

}  // namespace mibci
