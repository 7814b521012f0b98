#pragma once

#include <optional>

#include "mibci/trial.hpp"

namespace mibci {

/// Butterworth prototype order used by every zero-phase filter.
inline constexpr int kFilterOrder = 4;

struct Band {
    double low_hz = 0.0;
    double high_hz = 0.0;
    friend bool operator==(const Band&, const Band&) = default;
};

struct TimeWindow {
    double start_s = 0.0;
    double end_s = 0.0;
    [[nodiscard]] double length() const noexcept { return end_s - start_s; }
    friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

enum class SpatialRef { kNone, kCar };

struct PreprocessConfig {
    std::optional<Band> band_hz;
    std::optional<double> lowpass_hz;
    SpatialRef spatial_ref = SpatialRef::kNone;
    /// Analysis window. For the LRP chain this is the feature window.
    TimeWindow window_s{0.5, 4.5};
    std::optional<TimeWindow> baseline_window_s;
};

/// Throws InvalidArgument unless the config fits a trial of `duration_s`
/// seconds sampled at `fs_hz`.
void validate(const PreprocessConfig& cfg, double fs_hz, double duration_s);

/// Forward-backward 4th-order Butterworth band-pass, per channel.
Trial bandpass_zero_phase(const Trial& trial, double fs_hz, double low_hz, double high_hz);
/// Forward-backward 4th-order Butterworth low-pass, per channel.
Trial lowpass_zero_phase(const Trial& trial, double fs_hz, double cutoff_hz);
/// Subtracts the instantaneous channel mean. Needs >= 2 channels.
Trial common_average_reference(const Trial& trial);

/// Sample range [first, first + count) covering the half-open window
/// [start_s, end_s), where sample k sits at k / fs.
struct SampleRange {
    Eigen::Index first = 0;
    Eigen::Index count = 0;
};
SampleRange window_samples(const TimeWindow& w, double fs_hz, Eigen::Index n_samples);

/// Keeps samples with start_s <= k / fs < end_s; count = round((end - start) * fs).
Trial crop(const Trial& trial, double fs_hz, double start_s, double end_s);
/// Per channel, subtracts the mean over the baseline window.
Trial baseline_correct(const Trial& trial, double fs_hz, const TimeWindow& window_s);

/// Applies spatial reference, then band-pass or low-pass, then baseline
/// correction (if configured), then crop to window_s unless `crop_window` is
/// false (the LRP chain keeps the full trial and averages window_s instead).
Trial apply(const PreprocessConfig& cfg, const Trial& trial, double fs_hz, bool crop_window = true);

}  // namespace mibci
