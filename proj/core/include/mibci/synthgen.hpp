#pragma once

#include <cstdint>
#include <string>

#include "mibci/trial.hpp"

namespace mibci {

/// Synthetic two-class motor-imagery EEG.
///
/// Three latent sources are mixed into the channels: two narrowband rhythm
/// sources centred on the rhythm band, and one slow drift source, through a
/// volume-conduction mixing matrix (smooth spatial falloff from seeded source
/// positions along a strip of channels). From
/// imagery onset to trial end, rhythm source 1 is attenuated by `erd_depth`
/// on class -1 trials and source 2 on class +1 trials; the drift source ramps
/// at -slope (class -1) or +slope (class +1) uV/s. The mixing matrix is fixed
/// by the seed and rotated by `session_drift * (session - 1)` radians for
/// later sessions. White noise of `noise_sigma_uv` is added per channel.
struct SynthConfig {
    int n_channels = 16;
    int n_sessions = 4;
    int trials_per_session = 70;
    double fs_hz = 100.0;
    double trial_duration_s = 5.0;
    double rhythm_center_hz = 13.0;
    double rhythm_width_hz = 2.0;
    double rhythm_amplitude_uv = 10.0;
    double erd_depth = 0.6;
    double imagery_onset_s = 0.5;
    double lrp_slope_uv_per_s = 2.0;
    double noise_sigma_uv = 10.0;
    double session_drift = 0.0;
    std::uint64_t seed = 1;
};

/// Throws InvalidArgument naming the offending field.
void validate(const SynthConfig& cfg);

/// Deterministic in cfg (including the seed). Labels are balanced within each
/// session and shuffled.
TrialSet generate(const SynthConfig& cfg);

/// Source-to-channel mixing matrix (channels x 3) used for `session`.
Eigen::MatrixXd mixing_matrix(const SynthConfig& cfg, int session);

/// JSON mirror of SynthConfig; missing fields keep their defaults, unknown
/// fields are rejected.
SynthConfig parse_synth_config(const std::string& json_text);
std::string to_json(const SynthConfig& cfg);

}  // namespace mibci
