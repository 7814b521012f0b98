#include <catch_amalgamated.hpp>

#include <numbers>

#include "helpers.hpp"
#include "mibci/error.hpp"
#include "mibci/filter.hpp"
#include "mibci/preprocess.hpp"

using namespace mibci;
using namespace mibci::test;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kFs = 100.0;

Eigen::RowVectorXd interior(const Signal& s, int row = 0, double edge = 0.1) {
    const auto n = s.cols();
    const auto skip = static_cast<Eigen::Index>(std::ceil(edge * static_cast<double>(n)));
    return s.row(row).segment(skip, n - 2 * skip);
}

// The test signal behind the reference values below.
Signal reference_input() {
    Signal x(1, 500);
    for (Eigen::Index n = 0; n < 500; ++n) {
        const double t = static_cast<double>(n);
        x(0, n) = std::sin(2 * std::numbers::pi * 13 * t / 100) +
                  0.5 * std::sin(2 * std::numbers::pi * 3 * t / 100) + 0.01 * t;
    }
    return x;
}

}  // namespace

TEST_CASE("band-pass matches an independent forward-backward reference") {
    // scipy.signal.sosfiltfilt(butter(4, [12, 14], 'bandpass', fs=100,
    // output='sos'), x, padtype='odd', padlen=24)
    const std::pair<Eigen::Index, double> expected[] = {
        {0, 0.015414610996650539},  {1, 0.6987861892953825},     {37, -0.97895590895294748},
        {250, 0.00049902128616757802}, {498, -0.10167433741672383}, {499, -0.058139472945109849}};
    const Trial out = bandpass_zero_phase(make_trial(reference_input()), kFs, 12.0, 14.0);
    for (const auto& [i, v] : expected) {
        CAPTURE(i);
        REQUIRE_THAT(out.data(0, i), WithinAbs(v, 1e-9));
    }
}

TEST_CASE("low-pass matches an independent forward-backward reference") {
    // scipy.signal.sosfiltfilt(butter(4, 1.5, fs=100, output='sos'), x,
    // padtype='odd', padlen=12)
    const std::pair<Eigen::Index, double> expected[] = {
        {0, -0.059464534130767667}, {1, -0.046057123793088642}, {37, 0.38425284434167273},
        {250, 2.500014260977562},    {498, 4.7732702903925164},   {499, 4.7731068195139006}};
    const Trial out = lowpass_zero_phase(make_trial(reference_input()), kFs, 1.5);
    for (const auto& [i, v] : expected) {
        CAPTURE(i);
        REQUIRE_THAT(out.data(0, i), WithinAbs(v, 1e-9));
    }
}

TEST_CASE("Butterworth magnitude response") {
    const SosFilter bp = butter_bandpass(4, 12.0, 14.0, kFs);
    REQUIRE(bp.order() == 8);
    REQUIRE(bp.pad_length() == 24);
    REQUIRE_THAT(std::abs(bp.response(13.0, kFs)), WithinAbs(1.0, 1e-9));
    REQUIRE_THAT(std::abs(bp.response(12.0, kFs)), WithinAbs(std::sqrt(0.5), 1e-9));
    REQUIRE_THAT(std::abs(bp.response(14.0, kFs)), WithinAbs(std::sqrt(0.5), 1e-9));

    // Analog prototype through the prewarped bilinear map: |H| = 1/sqrt(1 + (W/Wc)^8).
    const SosFilter lp = butter_lowpass(4, 1.5, kFs);
    const double wc = std::tan(std::numbers::pi * 1.5 / kFs);
    for (double f : {0.5, 1.5, 3.0, 10.0}) {
        const double ratio = std::tan(std::numbers::pi * f / kFs) / wc;
        REQUIRE_THAT(std::abs(lp.response(f, kFs)), WithinAbs(1.0 / std::sqrt(1.0 + std::pow(ratio, 8)), 1e-9));
    }
}

TEST_CASE("band-pass blocks DC and passes the centre frequency") {
    Signal dc = Signal::Constant(1, 400, 3.0);
    const Trial dc_out = bandpass_zero_phase(make_trial(dc), kFs, 12.0, 14.0);
    REQUIRE(interior(dc_out.data).cwiseAbs().maxCoeff() < 1e-6 * 3.0);

    const Signal x = sinusoid(13.0, kFs, 400);
    const Trial y = bandpass_zero_phase(make_trial(x), kFs, 12.0, 14.0);
    const double ratio = rms(interior(y.data)) / rms(interior(x));
    REQUIRE(ratio >= 0.99);
    REQUIRE(ratio <= 1.01);

    // Zero phase: every interior local maximum of the output sits within one
    // sample of a maximum of the input.
    const auto in = interior(x), out = interior(y.data);
    for (Eigen::Index i = 1; i + 1 < out.size(); ++i) {
        if (out(i) > out(i - 1) && out(i) >= out(i + 1) && out(i) > 0.5) {
            const Eigen::Index lo = std::max<Eigen::Index>(0, i - 1);
            const Eigen::Index hi = std::min<Eigen::Index>(in.size() - 1, i + 1);
            Eigen::Index arg = lo;
            for (Eigen::Index k = lo; k <= hi; ++k) {
                if (in(k) > in(arg)) arg = k;
            }
            REQUIRE(std::abs(arg - i) <= 1);
        }
    }

    const Signal far = sinusoid(30.0, kFs, 400);
    const Trial far_out = bandpass_zero_phase(make_trial(far), kFs, 12.0, 14.0);
    REQUIRE(rms(interior(far_out.data)) < 0.05 * rms(interior(far)));
}

TEST_CASE("low-pass gain") {
    const Trial c = lowpass_zero_phase(make_trial(Signal::Constant(1, 500, 5.0)), kFs, 1.5);
    REQUIRE((interior(c.data).array() - 5.0).abs().maxCoeff() < 1e-6);

    const Signal slow = sinusoid(0.2, kFs, 2000);
    const Trial slow_out = lowpass_zero_phase(make_trial(slow), kFs, 1.5);
    REQUIRE_THAT(rms(interior(slow_out.data)) / rms(interior(slow)), WithinAbs(1.0, 0.02));

    const Signal fast = sinusoid(10.0, kFs, 500);
    const Trial fast_out = lowpass_zero_phase(make_trial(fast), kFs, 1.5);
    REQUIRE(rms(interior(fast_out.data)) < 0.05 * rms(interior(fast)));
}

TEST_CASE("filters reject bad parameters") {
    const Trial t = make_trial(random_signal(2, 400, 1));
    REQUIRE_THROWS_AS(bandpass_zero_phase(t, kFs, 14.0, 12.0), InvalidArgument);
    REQUIRE_THROWS_AS(bandpass_zero_phase(t, kFs, 12.0, 60.0), InvalidArgument);
    REQUIRE_THROWS_AS(lowpass_zero_phase(t, kFs, 0.0), InvalidArgument);
    REQUIRE_THROWS_AS(lowpass_zero_phase(t, kFs, 50.0), InvalidArgument);
    const Trial short_trial = make_trial(random_signal(1, 20, 1));
    REQUIRE_THROWS_AS(bandpass_zero_phase(short_trial, kFs, 12.0, 14.0), InvalidArgument);
}

TEST_CASE("zero-phase filtering commutes with time reversal") {
    const Signal x = random_signal(1, 3000, 11);
    const Signal rev = x.rowwise().reverse();
    for (int which = 0; which < 2; ++which) {
        const auto run = [&](const Signal& s) {
            return which == 0 ? bandpass_zero_phase(make_trial(s), kFs, 8.0, 35.0).data
                              : lowpass_zero_phase(make_trial(s), kFs, 1.5).data;
        };
        const Signal a = run(x);
        const Signal b = run(rev).rowwise().reverse();
        CAPTURE(which);
        REQUIRE((interior(a, 0, 0.25) - interior(b, 0, 0.25)).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("filtering is linear") {
    const Signal x = random_signal(3, 500, 1), y = random_signal(3, 500, 2);
    const double a = 2.5, b = -0.75;
    const auto f = [](const Signal& s) { return bandpass_zero_phase(make_trial(s), kFs, 12.0, 14.0).data; };
    const Signal lhs = f(a * x + b * y);
    const Signal rhs = a * f(x) + b * f(y);
    REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
    const auto g = [](const Signal& s) { return lowpass_zero_phase(make_trial(s), kFs, 1.5).data; };
    REQUIRE((g(a * x + b * y) - (a * g(x) + b * g(y))).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("common average reference") {
    Signal same(2, 10);
    same.row(0) = random_signal(1, 10, 3);
    same.row(1) = same.row(0);
    REQUIRE(common_average_reference(make_trial(same)).data.cwiseAbs().maxCoeff() == 0.0);

    Signal steps(3, 4);
    steps.row(0).setConstant(1.0);
    steps.row(1).setConstant(2.0);
    steps.row(2).setConstant(3.0);
    const Signal out = common_average_reference(make_trial(steps)).data;
    REQUIRE_THAT(out(0, 2), WithinAbs(-1.0, 1e-15));
    REQUIRE_THAT(out(1, 2), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(out(2, 2), WithinAbs(1.0, 1e-15));

    const Trial r = make_trial(random_signal(5, 100, 4));
    const Trial once = common_average_reference(r);
    REQUIRE(once.data.colwise().mean().cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE((common_average_reference(once).data - once.data).cwiseAbs().maxCoeff() < 1e-12);

    REQUIRE_THROWS_AS(common_average_reference(make_trial(random_signal(1, 10, 1))), InvalidArgument);
}

TEST_CASE("crop uses half-open windows at k / fs") {
    const Trial t = make_trial(random_signal(2, 500, 5), Label::kPos, 3, 7);
    const Trial c = crop(t, kFs, 0.5, 4.5);
    REQUIRE(c.samples() == 400);
    REQUIRE(c.data(1, 0) == t.data(1, 50));
    REQUIRE(c.label == Label::kPos);
    REQUIRE(c.session_id == 3);
    REQUIRE(c.trial_index == 7);

    REQUIRE(crop(t, kFs, 0.0, 5.0).data == t.data);

    const Trial twice = crop(crop(t, kFs, 0.5, 4.5), kFs, 1.0, 2.0);
    REQUIRE(twice.data == crop(t, kFs, 1.5, 2.5).data);

    REQUIRE_THROWS_AS(crop(t, kFs, 4.0, 5.5), InvalidArgument);
    REQUIRE_THROWS_AS(crop(t, kFs, 2.0, 2.0), InvalidArgument);
}

TEST_CASE("baseline correction") {
    const Trial flat = make_trial(Signal::Constant(2, 100, 3.0));
    REQUIRE(baseline_correct(flat, kFs, {0.3, 0.6}).data.cwiseAbs().maxCoeff() == 0.0);

    Signal ramp(1, 100);
    for (Eigen::Index k = 0; k < 100; ++k) ramp(0, k) = static_cast<double>(k);
    const Signal out = baseline_correct(make_trial(ramp), kFs, {0.0, 0.5}).data;
    REQUIRE_THAT(out(0, 0), WithinAbs(-24.5, 1e-12));
    REQUIRE_THAT(out(0, 99), WithinAbs(99.0 - 24.5, 1e-12));

    const Trial r = make_trial(random_signal(4, 300, 6));
    const Signal corrected = baseline_correct(r, kFs, {0.0, 0.5}).data;
    REQUIRE(corrected.leftCols(50).rowwise().mean().cwiseAbs().maxCoeff() < 1e-12);

    REQUIRE_THROWS_AS(baseline_correct(r, kFs, {0.5, 0.5}), InvalidArgument);
}

TEST_CASE("operations preserve shape and metadata") {
    const Trial t = make_trial(random_signal(3, 500, 9), Label::kNeg, 2, 4);
    for (const Trial& out : {bandpass_zero_phase(t, kFs, 8, 35), lowpass_zero_phase(t, kFs, 1.5),
                             common_average_reference(t), baseline_correct(t, kFs, {0.0, 0.5})}) {
        REQUIRE(out.channels() == 3);
        REQUIRE(out.samples() == 500);
        REQUIRE(out.label == Label::kNeg);
        REQUIRE(out.session_id == 2);
        REQUIRE(out.trial_index == 4);
    }
}

TEST_CASE("preprocess config validation") {
    PreprocessConfig cfg;
    cfg.band_hz = Band{12.0, 14.0};
    REQUIRE_NOTHROW(validate(cfg, kFs, 5.0));
    cfg.band_hz = Band{12.0, 55.0};
    REQUIRE_THROWS_AS(validate(cfg, kFs, 5.0), InvalidArgument);
    cfg.band_hz = Band{12.0, 14.0};
    cfg.window_s = {0.5, 6.0};
    REQUIRE_THROWS_AS(validate(cfg, kFs, 5.0), InvalidArgument);
    cfg.window_s = {0.5, 4.5};
    cfg.baseline_window_s = TimeWindow{-1.0, 0.5};
    REQUIRE_THROWS_AS(validate(cfg, kFs, 5.0), InvalidArgument);
}
