#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace mibci {

/// Channels x samples, row-major so each channel is contiguous.
using Signal = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Class label. kNeg is "hand" (or "left"), kPos is "foot" (or "right").
enum class Label : std::int8_t { kNeg = -1, kUnlabeled = 0, kPos = 1 };

inline int to_int(Label l) noexcept { return static_cast<int>(l); }
inline bool is_labeled(Label l) noexcept { return l != Label::kUnlabeled; }
Label label_from_int(int v);

struct Trial {
    Signal data;
    Label label = Label::kUnlabeled;
    int session_id = 1;
    int trial_index = 0;

    [[nodiscard]] Eigen::Index channels() const noexcept { return data.rows(); }
    [[nodiscard]] Eigen::Index samples() const noexcept { return data.cols(); }
};

/// An ordered, validated collection of equally shaped trials grouped into
/// contiguous sessions. Immutable once constructed.
class TrialSet {
public:
    TrialSet() = default;

    /// Throws InvalidArgument if any invariant is violated.
    TrialSet(std::vector<Trial> trials, double sampling_rate_hz,
             std::vector<std::string> channel_labels);

    [[nodiscard]] std::span<const Trial> trials() const noexcept { return trials_; }
    [[nodiscard]] const Trial& operator[](std::size_t i) const { return trials_[i]; }
    [[nodiscard]] std::size_t size() const noexcept { return trials_.size(); }
    [[nodiscard]] bool empty() const noexcept { return trials_.empty(); }

    [[nodiscard]] double sampling_rate_hz() const noexcept { return fs_; }
    [[nodiscard]] const std::vector<std::string>& channel_labels() const noexcept {
        return channel_labels_;
    }
    [[nodiscard]] Eigen::Index channels() const noexcept {
        return static_cast<Eigen::Index>(channel_labels_.size());
    }
    [[nodiscard]] Eigen::Index samples() const noexcept {
        return trials_.empty() ? 0 : trials_.front().samples();
    }
    [[nodiscard]] double duration_s() const noexcept {
        return static_cast<double>(samples()) / fs_;
    }

    /// Distinct session ids in recording order.
    [[nodiscard]] std::vector<int> session_ids() const;
    [[nodiscard]] std::vector<Label> labels() const;
    [[nodiscard]] bool fully_labeled() const noexcept;

    /// Subset by position, preserving the given order.
    [[nodiscard]] TrialSet subset(std::span<const std::size_t> indices) const;
    /// Trials of one session.
    [[nodiscard]] TrialSet session(int session_id) const;
    /// Same data with every label replaced by kUnlabeled.
    [[nodiscard]] TrialSet without_labels() const;
    /// Same data with labels replaced; labels.size() must equal size().
    [[nodiscard]] TrialSet with_labels(std::span<const Label> labels) const;

    /// Concatenation; both sets must share rate, channels and sample count.
    [[nodiscard]] static TrialSet concat(const TrialSet& a, const TrialSet& b);

private:
    std::vector<Trial> trials_;
    double fs_ = 0.0;
    std::vector<std::string> channel_labels_;
};

}  // namespace mibci
