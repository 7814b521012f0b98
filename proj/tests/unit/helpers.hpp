#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mibci/synthgen.hpp"
#include "mibci/trial.hpp"

namespace mibci::test {

inline Trial make_trial(const Signal& data, Label label = Label::kUnlabeled, int session = 1,
                        int index = 0) {
    Trial t;
    t.data = data;
    t.label = label;
    t.session_id = session;
    t.trial_index = index;
    return t;
}

inline Signal random_signal(Eigen::Index channels, Eigen::Index samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Signal s(channels, samples);
    for (Eigen::Index c = 0; c < channels; ++c) {
        for (Eigen::Index t = 0; t < samples; ++t) s(c, t) = normal(rng);
    }
    return s;
}

inline Signal sinusoid(double freq_hz, double fs, Eigen::Index samples, double amplitude = 1.0,
                       double phase = 0.0) {
    Signal s(1, samples);
    for (Eigen::Index t = 0; t < samples; ++t) {
        s(0, t) = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * t / fs + phase);
    }
    return s;
}

inline std::vector<std::string> channel_names(Eigen::Index n) {
    std::vector<std::string> names;
    for (Eigen::Index c = 0; c < n; ++c) names.push_back("c" + std::to_string(c));
    return names;
}

/// A small, easy synthetic set: strong ERD and little noise.
inline SynthConfig easy_synth(std::uint64_t seed = 1) {
    SynthConfig c;
    c.n_channels = 8;
    c.n_sessions = 2;
    c.trials_per_session = 40;
    c.erd_depth = 0.9;
    c.noise_sigma_uv = 2.0;
    c.seed = seed;
    return c;
}

inline double rms(const Eigen::Ref<const Eigen::RowVectorXd>& v) {
    return std::sqrt(v.squaredNorm() / static_cast<double>(v.size()));
}

}  // namespace mibci::test
