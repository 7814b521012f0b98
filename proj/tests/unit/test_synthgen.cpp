#include <catch_amalgamated.hpp>

#include <Eigen/QR>

#include "helpers.hpp"
#include "mibci/channel_select.hpp"
#include "mibci/error.hpp"
#include "mibci/pipeline.hpp"
#include "mibci/synthgen.hpp"

using namespace mibci;
using namespace mibci::test;
using Catch::Matchers::WithinAbs;

TEST_CASE("generation is deterministic in the seed") {
    const SynthConfig c = easy_synth(5);
    const TrialSet a = generate(c), b = generate(c);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].data == b[i].data);
        REQUIRE(a[i].label == b[i].label);
    }
    SynthConfig other = c;
    other.seed = 6;
    REQUIRE(generate(other)[0].data != a[0].data);
}

TEST_CASE("shape, sessions and balanced labels") {
    SynthConfig c;
    c.n_channels = 5;
    c.n_sessions = 3;
    c.trials_per_session = 10;
    c.fs_hz = 128.0;
    c.trial_duration_s = 4.0;
    const TrialSet s = generate(c);
    REQUIRE(s.size() == 30);
    REQUIRE(s.channels() == 5);
    REQUIRE(s.samples() == 512);
    REQUIRE(s.sampling_rate_hz() == 128.0);
    REQUIRE(s.channel_labels().front() == "ch1");
    REQUIRE(s.session_ids() == std::vector<int>{1, 2, 3});
    REQUIRE(s.fully_labeled());
    for (int sid : s.session_ids()) {
        const TrialSet one = s.session(sid);
        int pos = 0;
        for (Label l : one.labels()) pos += l == Label::kPos;
        REQUIRE(pos == 5);
        for (std::size_t i = 0; i < one.size(); ++i) REQUIRE(one[i].trial_index == static_cast<int>(i));
    }
}

TEST_CASE("validation names the field") {
    const auto rejects = [](SynthConfig c, const std::string& field) {
        try {
            validate(c);
            FAIL("expected InvalidArgument for " + field);
        } catch (const InvalidArgument& e) {
            REQUIRE_THAT(e.what(), Catch::Matchers::ContainsSubstring(field));
        }
    };
    SynthConfig c;
    REQUIRE_NOTHROW(validate(c));
    c.erd_depth = -0.1;
    rejects(c, "erd_depth");
    c = {};
    c.erd_depth = 1.1;
    rejects(c, "erd_depth");
    c = {};
    c.trials_per_session = 7;
    rejects(c, "trials_per_session");
    c = {};
    c.rhythm_center_hz = 49.5;
    rejects(c, "rhythm_center_hz");
    c = {};
    c.session_drift = -1.0;
    rejects(c, "session_drift");
    c = {};
    c.n_channels = 2;
    rejects(c, "n_channels");
    c = {};
    c.noise_sigma_uv = -1.0;
    rejects(c, "noise_sigma_uv");
}

TEST_CASE("synth config JSON") {
    SynthConfig c;
    c.seed = 1234567890123ULL;
    c.session_drift = 0.15;
    c.noise_sigma_uv = 20.0;
    const SynthConfig back = parse_synth_config(to_json(c));
    REQUIRE(to_json(back) == to_json(c));
    REQUIRE(back.seed == c.seed);

    const SynthConfig band = parse_synth_config(R"({"rhythm_band_hz": [20, 4], "n_channels": 6})");
    REQUIRE(band.rhythm_center_hz == 20.0);
    REQUIRE(band.rhythm_width_hz == 4.0);
    REQUIRE(band.n_channels == 6);
    REQUIRE(band.trials_per_session == 70);

    REQUIRE_THROWS_AS(parse_synth_config(R"({"ERD": 0.5})"), InvalidArgument);
    REQUIRE_THROWS_AS(parse_synth_config(R"({"erd_depth": "deep"})"), InvalidArgument);
    REQUIRE_THROWS_AS(parse_synth_config(R"({"erd_depth": -0.2})"), InvalidArgument);
    REQUIRE_THROWS_AS(parse_synth_config(R"({"rhythm_band_hz": [13]})"), InvalidArgument);
}

TEST_CASE("mixing matrix is full rank and rotates with drift") {
    SynthConfig c;
    const Eigen::MatrixXd a1 = mixing_matrix(c, 1);
    REQUIRE(a1.rows() == 16);
    REQUIRE(a1.cols() == 3);
    REQUIRE(Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(a1).rank() == 3);
    REQUIRE(mixing_matrix(c, 4) == a1);

    c.session_drift = 0.2;
    const Eigen::MatrixXd a3 = mixing_matrix(c, 3);
    REQUIRE(mixing_matrix(c, 1) == a1);
    REQUIRE((a3 - a1).norm() > 1e-3);
    // A rotation preserves the Gram matrix of the source columns.
    REQUIRE(((a3.transpose() * a3) - (a1.transpose() * a1)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("no planted signal means chance accuracy") {
    SynthConfig c;
    c.n_channels = 8;
    c.n_sessions = 4;
    c.trials_per_session = 100;
    c.erd_depth = 0.0;
    c.lrp_slope_uv_per_s = 0.0;
    c.seed = 3;
    const TrialSet s = generate(c);
    const auto [train, test] = split(s, {0.5, SplitMode::kPrefix});
    REQUIRE(test.size() == 200);
    PipelineConfig cfg = default_config(FeatureMethod::kCsp);
    cfg.cv_folds = 0;
    cfg.ensemble.rounds = 15;
    const double acc = *run_static(train, test, cfg).test_accuracy;
    REQUIRE(acc >= 43.0);
    REQUIRE(acc <= 57.0);
}

TEST_CASE("band power separates the classes on some channels far more than others") {
    SynthConfig c;
    c.seed = 2;
    const TrialSet s = generate(c);
    const PreprocessConfig pre = default_preprocess(FeatureMethod::kCsp);
    Eigen::MatrixXd power(static_cast<Eigen::Index>(s.size()), s.channels());
    for (std::size_t i = 0; i < s.size(); ++i) {
        power.row(static_cast<Eigen::Index>(i)) = log_band_power(apply(pre, s[i], s.sampling_rate_hz())).transpose();
    }
    const Eigen::VectorXd scores = fisher_scores(power, s.labels());
    REQUIRE(scores.maxCoeff() >= 10.0 * scores.minCoeff());
}

TEST_CASE("CSP recovers the rhythm from a tenth of the trials") {
    const TrialSet s = generate(SynthConfig{});
    const auto [train, test] = split(s, {0.1, SplitMode::kPrefix});
    PipelineConfig cfg = default_config(FeatureMethod::kCsp);
    cfg.cv_folds = 0;
    REQUIRE(*run_static(train, test, cfg).test_accuracy >= 90.0);
}
