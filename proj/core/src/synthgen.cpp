#include "mibci/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/QR>

#include "json_util.hpp"
#include "mibci/error.hpp"
#include "mibci/filter.hpp"
#include "mibci/preprocess.hpp"

namespace mibci {
namespace {

constexpr int kSources = 3;
constexpr int kRhythmFilterOrder = 2;
constexpr double kSpread = 0.3;
constexpr double kJitter = 0.1;

std::mt19937_64 stream(std::uint64_t seed, std::uint32_t a, std::uint32_t b = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), a, b};
    return std::mt19937_64(seq);
}

SosFilter rhythm_filter(const SynthConfig& cfg) {
    const double half = cfg.rhythm_width_hz / 2.0;
    return butter_bandpass(kRhythmFilterOrder, cfg.rhythm_center_hz - half,
                           cfg.rhythm_center_hz + half, cfg.fs_hz);
}

// RMS of unit white noise after the forward-backward filter: the integral of
// |H|^4 over frequency.
double rhythm_gain(const SosFilter& f, double fs) {
    constexpr int kGrid = 20000;
    double acc = 0.0;
    for (int i = 0; i < kGrid; ++i) {
        const double freq = (i + 0.5) / kGrid * fs / 2.0;
        acc += std::pow(std::abs(f.response(freq, fs)), 4);
    }
    return std::sqrt(acc / kGrid);
}

}  // namespace

void validate(const SynthConfig& c) {
    auto fail = [](const std::string& field, const std::string& why) {
        throw InvalidArgument("synth config field \"" + field + "\" " + why);
    };
    if (c.n_channels < kSources) fail("n_channels", "must be >= 3");
    if (c.n_sessions < 1) fail("n_sessions", "must be >= 1");
    if (c.trials_per_session < 2 || c.trials_per_session % 2 != 0) {
        fail("trials_per_session", "must be a positive even number");
    }
    if (!(c.fs_hz > 0.0)) fail("fs_hz", "must be > 0");
    if (!(c.trial_duration_s > 0.0)) fail("trial_duration_s", "must be > 0");
    if (!(c.rhythm_width_hz > 0.0)) fail("rhythm_width_hz", "must be > 0");
    if (!(c.rhythm_center_hz - c.rhythm_width_hz / 2.0 > 0.0) ||
        !(c.rhythm_center_hz + c.rhythm_width_hz / 2.0 < c.fs_hz / 2.0)) {
        fail("rhythm_center_hz", "must place the rhythm band inside (0, fs/2)");
    }
    if (!(c.rhythm_amplitude_uv >= 0.0)) fail("rhythm_amplitude_uv", "must be >= 0");
    if (!(c.erd_depth >= 0.0 && c.erd_depth <= 1.0)) fail("erd_depth", "must lie in [0, 1]");
    if (!(c.imagery_onset_s >= 0.0 && c.imagery_onset_s < c.trial_duration_s)) {
        fail("imagery_onset_s", "must lie inside the trial");
    }
    if (!std::isfinite(c.lrp_slope_uv_per_s)) fail("lrp_slope_uv_per_s", "must be finite");
    if (!(c.noise_sigma_uv >= 0.0)) fail("noise_sigma_uv", "must be >= 0");
    if (!(c.session_drift >= 0.0)) fail("session_drift", "must be >= 0");
    const auto n = static_cast<long>(std::llround(c.trial_duration_s * c.fs_hz));
    if (n <= 3 * 2 * kRhythmFilterOrder + 1) fail("trial_duration_s", "is too short at this fs_hz");
}

Eigen::MatrixXd mixing_matrix(const SynthConfig& cfg, int session) {
    auto rng = stream(cfg.seed, 0x6d6978U);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit;
    const Eigen::Index c = cfg.n_channels;

    // Volume conduction: channels sit evenly on a unit strip and each source
    // projects with a Gaussian falloff around its seeded position. The rhythm
    // sources lie left and right of centre, close enough that most channels
    // see both; the drift source lies near the middle.
    const double centre[kSources] = {0.35, 0.65, 0.5};
    Eigen::MatrixXd a(c, kSources);
    for (Eigen::Index j = 0; j < kSources; ++j) {
        const double pos = centre[j] + (unit(rng) - 0.5) * 0.2;
        for (Eigen::Index i = 0; i < c; ++i) {
            const double d = static_cast<double>(i) / static_cast<double>(c - 1) - pos;
            a(i, j) = std::exp(-d * d / (2.0 * kSpread * kSpread)) + kJitter * normal(rng);
        }
    }
    const double angle = cfg.session_drift * (session - 1);
    if (angle == 0.0) return a;

    // Rotate by `angle` in consecutive planes of a seeded orthonormal basis.
    Eigen::MatrixXd g(c, c);
    for (Eigen::Index j = 0; j < c; ++j) {
        for (Eigen::Index i = 0; i < c; ++i) g(i, j) = normal(rng);
    }
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(c, c);
    const double cs = std::cos(angle), sn = std::sin(angle);
    for (Eigen::Index k = 0; k + 1 < c; k += 2) {
        rot(k, k) = cs;
        rot(k, k + 1) = -sn;
        rot(k + 1, k) = sn;
        rot(k + 1, k + 1) = cs;
    }
    return q * rot * q.transpose() * a;
}

TrialSet generate(const SynthConfig& cfg) {
    validate(cfg);
    const auto n = static_cast<Eigen::Index>(std::llround(cfg.trial_duration_s * cfg.fs_hz));
    const auto onset = static_cast<Eigen::Index>(std::ceil(cfg.imagery_onset_s * cfg.fs_hz - 1e-9));
    const SosFilter rf = rhythm_filter(cfg);
    const double rhythm_scale = cfg.rhythm_amplitude_uv / rhythm_gain(rf, cfg.fs_hz);
    const double keep = 1.0 - cfg.erd_depth;

    std::vector<Trial> trials;
    trials.reserve(static_cast<std::size_t>(cfg.n_sessions * cfg.trials_per_session));
    for (int session = 1; session <= cfg.n_sessions; ++session) {
        const Eigen::MatrixXd mix = mixing_matrix(cfg, session);

        std::vector<Label> order(static_cast<std::size_t>(cfg.trials_per_session));
        for (std::size_t i = 0; i < order.size(); ++i) {
            order[i] = i < order.size() / 2 ? Label::kNeg : Label::kPos;
        }
        auto shuffle_rng = stream(cfg.seed, 0x6f7264U, static_cast<std::uint32_t>(session));
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        for (int k = 0; k < cfg.trials_per_session; ++k) {
            auto rng = stream(cfg.seed, static_cast<std::uint32_t>(session),
                              static_cast<std::uint32_t>(k) + 1U);
            std::normal_distribution<double> normal;
            const Label label = order[static_cast<std::size_t>(k)];

            Eigen::MatrixXd src(kSources, n);
            std::vector<double> white(static_cast<std::size_t>(n));
            for (int s = 0; s < 2; ++s) {
                for (double& v : white) v = normal(rng);
                std::vector<double> narrow(white.size());
                rf.filtfilt(white, narrow);
                const bool attenuated = (s == 0 && label == Label::kNeg) || (s == 1 && label == Label::kPos);
                for (Eigen::Index t = 0; t < n; ++t) {
                    const double gain = attenuated && t >= onset ? keep : 1.0;
                    src(s, t) = rhythm_scale * gain * narrow[static_cast<std::size_t>(t)];
                }
            }
            const double slope = label == Label::kNeg ? -cfg.lrp_slope_uv_per_s : cfg.lrp_slope_uv_per_s;
            for (Eigen::Index t = 0; t < n; ++t) {
                src(2, t) = t >= onset ? slope * static_cast<double>(t - onset) / cfg.fs_hz : 0.0;
            }

            Trial trial;
            trial.data = mix * src;
            for (Eigen::Index c = 0; c < trial.data.rows(); ++c) {
                for (Eigen::Index t = 0; t < n; ++t) trial.data(c, t) += cfg.noise_sigma_uv * normal(rng);
            }
            trial.label = label;
            trial.session_id = session;
            trial.trial_index = k;
            trials.push_back(std::move(trial));
        }
    }

    std::vector<std::string> names;
    for (int c = 0; c < cfg.n_channels; ++c) names.push_back("ch" + std::to_string(c + 1));
    return TrialSet(std::move(trials), cfg.fs_hz, std::move(names));
}

SynthConfig parse_synth_config(const std::string& text) {
    using nlohmann::json;
    const json j = detail::parse_or_throw(text, "synth config");
    detail::reject_unknown_keys(
        j,
        {"n_channels", "n_sessions", "trials_per_session", "fs_hz", "trial_duration_s",
         "rhythm_center_hz", "rhythm_width_hz", "rhythm_band_hz", "rhythm_amplitude_uv", "erd_depth",
         "imagery_onset_s", "lrp_slope_uv_per_s", "noise_sigma_uv", "session_drift", "seed"},
        "");
    SynthConfig c;
    auto get = [&](const char* key, auto& dst) {
        if (!j.contains(key)) return;
        try {
            dst = j.at(key).get<std::remove_reference_t<decltype(dst)>>();
        } catch (const json::exception&) {
            throw InvalidArgument(std::string("synth config field \"") + key + "\" has the wrong type");
        }
    };
    get("n_channels", c.n_channels);
    get("n_sessions", c.n_sessions);
    get("trials_per_session", c.trials_per_session);
    get("fs_hz", c.fs_hz);
    get("trial_duration_s", c.trial_duration_s);
    get("rhythm_center_hz", c.rhythm_center_hz);
    get("rhythm_width_hz", c.rhythm_width_hz);
    if (j.contains("rhythm_band_hz")) {
        const json& b = j["rhythm_band_hz"];
        if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number()) {
            throw InvalidArgument("synth config field \"rhythm_band_hz\" must be [center, width]");
        }
        c.rhythm_center_hz = b[0].get<double>();
        c.rhythm_width_hz = b[1].get<double>();
    }
    get("rhythm_amplitude_uv", c.rhythm_amplitude_uv);
    get("erd_depth", c.erd_depth);
    get("imagery_onset_s", c.imagery_onset_s);
    get("lrp_slope_uv_per_s", c.lrp_slope_uv_per_s);
    get("noise_sigma_uv", c.noise_sigma_uv);
    get("session_drift", c.session_drift);
    get("seed", c.seed);
    validate(c);
    return c;
}

std::string to_json(const SynthConfig& c) {
    const nlohmann::json j = {
        {"n_channels", c.n_channels},
        {"n_sessions", c.n_sessions},
        {"trials_per_session", c.trials_per_session},
        {"fs_hz", c.fs_hz},
        {"trial_duration_s", c.trial_duration_s},
        {"rhythm_band_hz", {c.rhythm_center_hz, c.rhythm_width_hz}},
        {"rhythm_amplitude_uv", c.rhythm_amplitude_uv},
        {"erd_depth", c.erd_depth},
        {"imagery_onset_s", c.imagery_onset_s},
        {"lrp_slope_uv_per_s", c.lrp_slope_uv_per_s},
        {"noise_sigma_uv", c.noise_sigma_uv},
        {"session_drift", c.session_drift},
        {"seed", c.seed},
    };
    return j.dump(2);
}

}  // namespace mibci
