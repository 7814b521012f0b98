#include "mibci/trial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mibci/error.hpp"

namespace mibci {

Label label_from_int(int v) {
    switch (v) {
        case -1: return Label::kNeg;
        case 0: return Label::kUnlabeled;
        case 1: return Label::kPos;
        default: throw InvalidArgument("label must be -1, +1 or unlabeled, got " + std::to_string(v));
    }
}

TrialSet::TrialSet(std::vector<Trial> trials, double sampling_rate_hz,
                   std::vector<std::string> channel_labels)
    : trials_(std::move(trials)), fs_(sampling_rate_hz), channel_labels_(std::move(channel_labels)) {
    if (!(fs_ > 0.0) || !std::isfinite(fs_)) {
        throw InvalidArgument("sampling rate must be positive and finite");
    }
    if (channel_labels_.empty()) {
        throw InvalidArgument("trial set needs at least one channel label");
    }
    const auto n_ch = static_cast<Eigen::Index>(channel_labels_.size());
    int prev_session = 0;
    for (std::size_t i = 0; i < trials_.size(); ++i) {
        const Trial& t = trials_[i];
        if (t.channels() != n_ch) {
            throw InvalidArgument("trial " + std::to_string(i) + " has " +
                                  std::to_string(t.channels()) + " channels, expected " +
                                  std::to_string(n_ch));
        }
        if (t.samples() < 2) {
            throw InvalidArgument("trial " + std::to_string(i) + " has fewer than 2 samples");
        }
        if (t.samples() != trials_.front().samples()) {
            throw InvalidArgument("trial " + std::to_string(i) +
                                  " sample count differs from the first trial");
        }
        if (!t.data.allFinite()) {
            throw InvalidArgument("trial " + std::to_string(i) + " contains non-finite values");
        }
        if (t.session_id < 1) {
            throw InvalidArgument("trial " + std::to_string(i) + " has session id < 1");
        }
        if (t.session_id < prev_session) {
            throw InvalidArgument("session ids must be nondecreasing (trial " +
                                  std::to_string(i) + ")");
        }
        if (t.trial_index < 0) {
            throw InvalidArgument("trial " + std::to_string(i) + " has negative trial index");
        }
        prev_session = t.session_id;
    }
}

std::vector<int> TrialSet::session_ids() const {
    std::vector<int> ids;
    for (const Trial& t : trials_) {
        if (ids.empty() || ids.back() != t.session_id) ids.push_back(t.session_id);
    }
    return ids;
}

std::vector<Label> TrialSet::labels() const {
    std::vector<Label> out;
    out.reserve(trials_.size());
    for (const Trial& t : trials_) out.push_back(t.label);
    return out;
}

bool TrialSet::fully_labeled() const noexcept {
    return std::all_of(trials_.begin(), trials_.end(),
                       [](const Trial& t) { return is_labeled(t.label); });
}

TrialSet TrialSet::subset(std::span<const std::size_t> indices) const {
    std::vector<Trial> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= trials_.size()) throw InvalidArgument("subset index out of range");
        out.push_back(trials_[i]);
    }
    return TrialSet(std::move(out), fs_, channel_labels_);
}

TrialSet TrialSet::session(int session_id) const {
    std::vector<Trial> out;
    for (const Trial& t : trials_) {
        if (t.session_id == session_id) out.push_back(t);
    }
    return TrialSet(std::move(out), fs_, channel_labels_);
}

TrialSet TrialSet::without_labels() const {
    std::vector<Trial> out(trials_.begin(), trials_.end());
    for (Trial& t : out) t.label = Label::kUnlabeled;
    TrialSet s;
    s.trials_ = std::move(out);
    s.fs_ = fs_;
    s.channel_labels_ = channel_labels_;
    return s;
}

TrialSet TrialSet::with_labels(std::span<const Label> labels) const {
    if (labels.size() != trials_.size()) {
        throw InvalidArgument("label count does not match trial count");
    }
    std::vector<Trial> out(trials_.begin(), trials_.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i].label = labels[i];
    TrialSet s;
    s.trials_ = std::move(out);
    s.fs_ = fs_;
    s.channel_labels_ = channel_labels_;
    return s;
}

TrialSet TrialSet::concat(const TrialSet& a, const TrialSet& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (a.fs_ != b.fs_ || a.channel_labels_ != b.channel_labels_) {
        throw InvalidArgument("cannot concatenate trial sets with different layouts");
    }
    std::vector<Trial> out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.trials_.begin(), a.trials_.end());
    out.insert(out.end(), b.trials_.begin(), b.trials_.end());
    return TrialSet(std::move(out), a.fs_, a.channel_labels_);
}

}  // namespace mibci
