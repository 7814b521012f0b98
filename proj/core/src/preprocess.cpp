#include "mibci/preprocess.hpp"

#include <cmath>
#include <string>

#include "mibci/error.hpp"
#include "mibci/filter.hpp"

namespace mibci {
namespace {

Trial filter_rows(const Trial& trial, const SosFilter& f) {
    Trial out = trial;
    for (Eigen::Index c = 0; c < trial.channels(); ++c) {
        const auto n = static_cast<std::size_t>(trial.samples());
        f.filtfilt({trial.data.row(c).data(), n}, {out.data.row(c).data(), n});
    }
    return out;
}

void check_window(const TimeWindow& w, double duration_s, const char* what) {
    constexpr double eps = 1e-9;
    if (!(w.start_s >= -eps && w.start_s < w.end_s && w.end_s <= duration_s + eps)) {
        throw InvalidArgument(std::string(what) + " [" + std::to_string(w.start_s) + ", " +
                              std::to_string(w.end_s) + ") s lies outside the " +
                              std::to_string(duration_s) + " s trial");
    }
}

}  // namespace

void validate(const PreprocessConfig& cfg, double fs_hz, double duration_s) {
    if (cfg.band_hz) {
        const Band& b = *cfg.band_hz;
        if (!(b.low_hz > 0.0 && b.low_hz < b.high_hz && b.high_hz < fs_hz / 2.0)) {
            throw InvalidArgument("band [" + std::to_string(b.low_hz) + ", " +
                                  std::to_string(b.high_hz) + "] Hz must satisfy 0 < low < high < fs/2");
        }
    }
    if (cfg.lowpass_hz && !(*cfg.lowpass_hz > 0.0 && *cfg.lowpass_hz < fs_hz / 2.0)) {
        throw InvalidArgument("low-pass cutoff must lie in (0, fs/2)");
    }
    check_window(cfg.window_s, duration_s, "window");
    if (cfg.baseline_window_s) check_window(*cfg.baseline_window_s, duration_s, "baseline window");
}

Trial bandpass_zero_phase(const Trial& trial, double fs_hz, double low_hz, double high_hz) {
    return filter_rows(trial, butter_bandpass(kFilterOrder, low_hz, high_hz, fs_hz));
}

Trial lowpass_zero_phase(const Trial& trial, double fs_hz, double cutoff_hz) {
    return filter_rows(trial, butter_lowpass(kFilterOrder, cutoff_hz, fs_hz));
}

Trial common_average_reference(const Trial& trial) {
    if (trial.channels() < 2) {
        throw InvalidArgument("common average reference needs at least 2 channels");
    }
    Trial out = trial;
    const Eigen::RowVectorXd mean = trial.data.colwise().mean();
    out.data.rowwise() -= mean;
    return out;
}

SampleRange window_samples(const TimeWindow& w, double fs_hz, Eigen::Index n_samples) {
    check_window(w, static_cast<double>(n_samples) / fs_hz, "window");
    const auto first = static_cast<Eigen::Index>(std::ceil(w.start_s * fs_hz - 1e-9));
    const auto count = static_cast<Eigen::Index>(std::llround(w.length() * fs_hz));
    if (count < 1) throw InvalidArgument("window contains no samples");
    if (first + count > n_samples) throw InvalidArgument("window runs past the end of the trial");
    return {first, count};
}

Trial crop(const Trial& trial, double fs_hz, double start_s, double end_s) {
    const SampleRange r = window_samples({start_s, end_s}, fs_hz, trial.samples());
    Trial out;
    out.data = trial.data.middleCols(r.first, r.count);
    out.label = trial.label;
    out.session_id = trial.session_id;
    out.trial_index = trial.trial_index;
    return out;
}

Trial baseline_correct(const Trial& trial, double fs_hz, const TimeWindow& window_s) {
    const SampleRange r = window_samples(window_s, fs_hz, trial.samples());
    Trial out = trial;
    const Eigen::VectorXd mean = trial.data.middleCols(r.first, r.count).rowwise().mean();
    out.data.colwise() -= mean;
    return out;
}

Trial apply(const PreprocessConfig& cfg, const Trial& trial, double fs_hz, bool crop_window) {
    Trial t = cfg.spatial_ref == SpatialRef::kCar ? common_average_reference(trial) : trial;
    if (cfg.band_hz) t = bandpass_zero_phase(t, fs_hz, cfg.band_hz->low_hz, cfg.band_hz->high_hz);
    if (cfg.lowpass_hz) t = lowpass_zero_phase(t, fs_hz, *cfg.lowpass_hz);
    if (cfg.baseline_window_s) t = baseline_correct(t, fs_hz, *cfg.baseline_window_s);
    if (crop_window) t = crop(t, fs_hz, cfg.window_s.start_s, cfg.window_s.end_s);
    return t;
}

}  // namespace mibci
