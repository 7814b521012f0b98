#include <random>

#include <benchmark/benchmark.h>

#include "mibci/bagging.hpp"
#include "mibci/csp.hpp"
#include "mibci/filter.hpp"
#include "mibci/param_select.hpp"
#include "mibci/pipeline.hpp"
#include "mibci/synthgen.hpp"

using namespace mibci;

namespace {

std::vector<double> noise(std::size_t n) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal;
    std::vector<double> x(n);
    for (double& v : x) v = normal(rng);
    return x;
}

void BM_Filtfilt(benchmark::State& state) {
    const auto x = noise(static_cast<std::size_t>(state.range(0)));
    std::vector<double> y(x.size());
    const SosFilter f = butter_bandpass(4, 12.0, 14.0, 100.0);
    for (auto _ : state) {
        f.filtfilt(x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Filtfilt)->Arg(500)->Arg(5000);

void BM_FitCsp(benchmark::State& state) {
    SynthConfig sc;
    sc.n_channels = static_cast<int>(state.range(0));
    sc.n_sessions = 1;
    const TrialSet set = generate(sc);
    std::vector<TrialMoments> neg, pos;
    for (const Trial& t : set.trials()) (t.label == Label::kNeg ? neg : pos).push_back(moments(t.data));
    for (auto _ : state) benchmark::DoNotOptimize(fit_csp(neg, pos, 1));
}
BENCHMARK(BM_FitCsp)->Arg(16)->Arg(64);

void BM_Bagging(benchmark::State& state) {
    const auto v = noise(224 * 8);
    const Eigen::MatrixXd x = Eigen::Map<const Eigen::MatrixXd>(v.data(), 224, 8);
    std::vector<Label> y;
    for (int i = 0; i < 224; ++i) y.push_back(i % 2 ? Label::kPos : Label::kNeg);
    for (auto _ : state) benchmark::DoNotOptimize(fit_bagging(x, y, 50, 0.5, 1));
}
BENCHMARK(BM_Bagging);

void BM_GridSearch(benchmark::State& state) {
    const SynthConfig sc;
    const TrialSet set = generate(sc);
    const auto [train, test] = split(set, {0.1, SplitMode::kPrefix});
    PipelineConfig cfg = default_config(FeatureMethod::kCsp);
    cfg.cv_folds = 0;
    const SearchSpace space = default_search_space(sc.trial_duration_s, sc.fs_hz, 1);
    const TrialSet hidden = test.without_labels();
    for (auto _ : state) benchmark::DoNotOptimize(grid_search(train, hidden, space, cfg));
}
BENCHMARK(BM_GridSearch)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
