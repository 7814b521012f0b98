#include "mibci/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "mibci/ar.hpp"
#include "mibci/channel_select.hpp"
#include "mibci/error.hpp"
#include "mibci/folds.hpp"
#include "mibci/lrp.hpp"

namespace mibci {
namespace {

bool uses(const PipelineConfig& cfg, FeatureMethod m) {
    return cfg.method == m || cfg.method == FeatureMethod::kCombined;
}

const PreprocessConfig& chain_for(const PipelineConfig& cfg, FeatureMethod m) {
    if (cfg.method != FeatureMethod::kCombined) return cfg.preprocess;
    switch (m) {
        case FeatureMethod::kAr: return cfg.chains.ar;
        case FeatureMethod::kLrp: return cfg.chains.lrp;
        default: return cfg.chains.csp;
    }
}

// Channels considered by AR/LRP: the explicit list for single-method
// pipelines, otherwise all channels (Fisher selection picks among them).
std::vector<int> candidate_channels(const PipelineConfig& cfg, Eigen::Index n_channels) {
    if (cfg.method != FeatureMethod::kCombined && !cfg.channels.empty()) return cfg.channels;
    std::vector<int> all(static_cast<std::size_t>(n_channels));
    std::iota(all.begin(), all.end(), 0);
    return all;
}

void check_channels(std::span<const int> chans, Eigen::Index n) {
    for (int c : chans) {
        if (c < 0 || c >= n) {
            throw InvalidArgument("channel index " + std::to_string(c) + " out of range (" +
                                  std::to_string(n) + " channels)");
        }
    }
}

std::vector<int> positions(std::size_t n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

std::vector<int> fisher_pick(const Eigen::MatrixXd& values, std::span<const std::size_t> idx,
                             std::span<const Label> labels, int n) {
    Eigen::MatrixXd sub(static_cast<Eigen::Index>(idx.size()), values.cols());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        sub.row(static_cast<Eigen::Index>(k)) = values.row(static_cast<Eigen::Index>(idx[k]));
    }
    return select_channels(fisher_scores(sub, labels), std::min<int>(n, static_cast<int>(values.cols())));
}

std::vector<std::size_t> iota_indices(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
}

}  // namespace

Evaluation evaluate(std::span<const Label> predicted, std::span<const Label> truth) {
    if (predicted.size() != truth.size()) {
        throw InvalidArgument("evaluate: " + std::to_string(predicted.size()) + " predictions for " +
                              std::to_string(truth.size()) + " labels");
    }
    if (truth.empty()) throw InvalidArgument("evaluate: no trials");
    Evaluation e;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (!is_labeled(truth[i]) || !is_labeled(predicted[i])) {
            throw InvalidArgument("evaluate: unlabeled entry at position " + std::to_string(i));
        }
        const bool t_pos = truth[i] == Label::kPos;
        const bool p_pos = predicted[i] == Label::kPos;
        if (t_pos) {
            ++(p_pos ? e.confusion.pos_as_pos : e.confusion.pos_as_neg);
        } else {
            ++(p_pos ? e.confusion.neg_as_pos : e.confusion.neg_as_neg);
        }
    }
    const int correct = e.confusion.neg_as_neg + e.confusion.pos_as_pos;
    e.accuracy = 100.0 * correct / static_cast<double>(truth.size());
    return e;
}

PreparedSet prepare(const PipelineConfig& cfg, const TrialSet& set) {
    validate(cfg);
    const double fs = set.sampling_rate_hz();
    const auto n = static_cast<Eigen::Index>(set.size());
    PreparedSet p;

    if (uses(cfg, FeatureMethod::kCsp)) {
        const PreprocessConfig& chain = chain_for(cfg, FeatureMethod::kCsp);
        validate(chain, fs, set.duration_s());
        check_channels(cfg.channels, set.channels());
        p.csp.reserve(set.size());
        for (const Trial& t : set.trials()) {
            const Trial pre = apply(chain, t, fs);
            TrialMoments mom = moments(pre.data);
            p.csp.push_back(cfg.channels.empty() ? std::move(mom) : mom.select(cfg.channels));
        }
    }
    if (uses(cfg, FeatureMethod::kAr)) {
        const PreprocessConfig& chain = chain_for(cfg, FeatureMethod::kAr);
        validate(chain, fs, set.duration_s());
        p.ar_candidates = candidate_channels(cfg, set.channels());
        check_channels(p.ar_candidates, set.channels());
        const auto nc = static_cast<Eigen::Index>(p.ar_candidates.size());
        p.ar_power.resize(n, nc);
        p.ar_coef.reserve(set.size());
        for (Eigen::Index i = 0; i < n; ++i) {
            const Trial pre = apply(chain, set[static_cast<std::size_t>(i)], fs);
            const Eigen::VectorXd power = log_band_power(pre);
            const FeatureVector f = ar_feature(pre, p.ar_candidates, cfg.ar_order);
            Eigen::MatrixXd coef(nc, cfg.ar_order + 1);
            for (Eigen::Index c = 0; c < nc; ++c) {
                coef.row(c) = f.values.segment(c * (cfg.ar_order + 1), cfg.ar_order + 1).transpose();
                p.ar_power(i, c) = power(p.ar_candidates[static_cast<std::size_t>(c)]);
            }
            p.ar_coef.push_back(std::move(coef));
        }
    }
    if (uses(cfg, FeatureMethod::kLrp)) {
        const PreprocessConfig& chain = chain_for(cfg, FeatureMethod::kLrp);
        validate(chain, fs, set.duration_s());
        p.lrp_candidates = candidate_channels(cfg, set.channels());
        check_channels(p.lrp_candidates, set.channels());
        p.lrp_means.resize(n, static_cast<Eigen::Index>(p.lrp_candidates.size()));
        for (Eigen::Index i = 0; i < n; ++i) {
            const Trial pre = apply(chain, set[static_cast<std::size_t>(i)], fs, false);
            p.lrp_means.row(i) = lrp_feature(pre, fs, p.lrp_candidates, chain.window_s).values.transpose();
        }
    }
    return p;
}

FittedFeatures fit_features(const PipelineConfig& cfg, const PreparedSet& prep,
                            std::span<const std::size_t> idx, std::span<const Label> labels) {
    if (idx.size() != labels.size()) throw InvalidArgument("fit_features: one label per index");
    FittedFeatures f;
    if (uses(cfg, FeatureMethod::kCsp)) {
        std::vector<TrialMoments> neg, pos;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            (labels[k] == Label::kNeg ? neg : pos).push_back(prep.csp[idx[k]]);
        }
        f.csp = fit_csp(std::span<const TrialMoments>(neg), std::span<const TrialMoments>(pos), cfg.m);
    }
    const bool explicit_channels = cfg.method != FeatureMethod::kCombined && !cfg.channels.empty();
    if (uses(cfg, FeatureMethod::kAr)) {
        f.ar_channels = explicit_channels ? positions(prep.ar_candidates.size())
                                          : fisher_pick(prep.ar_power, idx, labels, cfg.n_channels);
    }
    if (uses(cfg, FeatureMethod::kLrp)) {
        f.lrp_channels = explicit_channels ? positions(prep.lrp_candidates.size())
                                           : fisher_pick(prep.lrp_means, idx, labels, cfg.n_channels);
    }
    return f;
}

Eigen::MatrixXd extract(const PipelineConfig& cfg, const FittedFeatures& fitted,
                        const PreparedSet& prep, std::span<const std::size_t> idx) {
    std::vector<FeatureVector> rows;
    rows.reserve(idx.size());
    const int p = cfg.ar_order;
    for (std::size_t i : idx) {
        std::vector<FeatureVector> parts;
        if (fitted.csp) {
            FeatureVector v{Eigen::VectorXd(1), FeatureMethod::kCsp};
            v.values(0) = csp_feature(*fitted.csp, prep.csp[i]);
            parts.push_back(std::move(v));
        }
        if (!fitted.ar_channels.empty()) {
            FeatureVector v{Eigen::VectorXd(static_cast<Eigen::Index>(fitted.ar_channels.size()) * (p + 1)),
                            FeatureMethod::kAr};
            for (std::size_t k = 0; k < fitted.ar_channels.size(); ++k) {
                v.values.segment(static_cast<Eigen::Index>(k) * (p + 1), p + 1) =
                    prep.ar_coef[i].row(fitted.ar_channels[k]).transpose();
            }
            parts.push_back(std::move(v));
        }
        if (!fitted.lrp_channels.empty()) {
            FeatureVector v{Eigen::VectorXd(static_cast<Eigen::Index>(fitted.lrp_channels.size())),
                            FeatureMethod::kLrp};
            for (std::size_t k = 0; k < fitted.lrp_channels.size(); ++k) {
                v.values(static_cast<Eigen::Index>(k)) =
                    prep.lrp_means(static_cast<Eigen::Index>(i), fitted.lrp_channels[k]);
            }
            parts.push_back(std::move(v));
        }
        rows.push_back(parts.size() == 1 ? std::move(parts.front()) : combine_features(parts));
    }
    return stack_rows(rows);
}

TrainedModel train_model(const PipelineConfig& cfg, const PreparedSet& prep,
                         std::span<const std::size_t> idx, std::span<const Label> labels) {
    TrainedModel model;
    model.features = fit_features(cfg, prep, idx, labels);
    model.ensemble = fit_bagging(extract(cfg, model.features, prep, idx), labels, cfg.ensemble.rounds,
                                 cfg.ensemble.subset_fraction, cfg.ensemble.seed);
    return model;
}

std::vector<Label> predict(const PipelineConfig& cfg, const TrainedModel& model,
                           const PreparedSet& prep, std::span<const std::size_t> idx) {
    const Eigen::MatrixXd x = extract(cfg, model.features, prep, idx);
    std::vector<Label> out(idx.size());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        out[static_cast<std::size_t>(i)] = bagging_predict(model.ensemble, x.row(i).transpose());
    }
    return out;
}

CvResult cross_validate(const TrialSet& train, const PipelineConfig& cfg, int folds,
                        std::uint64_t seed) {
    if (!train.fully_labeled()) throw InvalidArgument("cross-validation needs a labeled set");
    if (static_cast<std::size_t>(folds) > train.size()) {
        throw InvalidArgument("cannot run " + std::to_string(folds) + "-fold cross-validation on " +
                              std::to_string(train.size()) + " trials");
    }
    const std::vector<Label> labels = train.labels();
    const auto parts = stratified_folds(labels, folds, seed);
    const PreparedSet prep = prepare(cfg, train);

    CvResult r;
    r.folds = folds;
    for (const auto& held : parts) {
        const auto fit_idx = complement(held, train.size());
        std::vector<Label> fit_labels, held_labels;
        for (std::size_t i : fit_idx) fit_labels.push_back(labels[i]);
        for (std::size_t i : held) held_labels.push_back(labels[i]);
        const TrainedModel model = train_model(cfg, prep, fit_idx, fit_labels);
        r.fold_accuracies.push_back(evaluate(predict(cfg, model, prep, held), held_labels).accuracy);
    }
    const double n = static_cast<double>(r.fold_accuracies.size());
    r.mean = std::accumulate(r.fold_accuracies.begin(), r.fold_accuracies.end(), 0.0) / n;
    double ss = 0.0;
    for (double a : r.fold_accuracies) ss += (a - r.mean) * (a - r.mean);
    r.std = std::sqrt(ss / (n - 1.0));
    return r;
}

namespace {

std::optional<CvResult> training_cv(const TrialSet& train, const PipelineConfig& cfg) {
    if (cfg.cv_folds == 0) return std::nullopt;
    const auto labels = train.labels();
    const auto n_neg = static_cast<int>(std::count(labels.begin(), labels.end(), Label::kNeg));
    const int n_pos = static_cast<int>(labels.size()) - n_neg;
    const int k = std::min({cfg.cv_folds, n_neg, n_pos});
    if (k < 2) return std::nullopt;
    return cross_validate(train, cfg, k, cfg.ensemble.seed);
}

// Classifies `target` with a model trained on `train` (labels taken from the
// set), optionally re-running the grid search first.
struct StepResult {
    std::vector<Label> predicted;
    PipelineConfig config;
    std::optional<SearchResult> search;
};

StepResult classify_step(const TrialSet& train, const TrialSet& target, const PipelineConfig& cfg) {
    StepResult out;
    out.config = cfg;
    const TrialSet hidden = target.without_labels();
    if (cfg.search) {
        out.search = grid_search(train, hidden, *cfg.search, cfg);
        out.config = out.search->config;
    }
    const PreparedSet prep_train = prepare(out.config, train);
    const PreparedSet prep_target = prepare(out.config, hidden);
    const auto labels = train.labels();
    const TrainedModel model = train_model(out.config, prep_train, iota_indices(train.size()), labels);
    out.predicted = predict(out.config, model, prep_target, iota_indices(hidden.size()));
    return out;
}

void score_report(EvalReport& report, const TrialSet& test) {
    std::vector<Label> pred, truth;
    std::map<int, std::pair<std::vector<Label>, std::vector<Label>>> by_session;
    for (std::size_t i = 0; i < test.size(); ++i) {
        if (!is_labeled(test[i].label)) continue;
        pred.push_back(report.predicted[i]);
        truth.push_back(test[i].label);
        by_session[test[i].session_id].first.push_back(report.predicted[i]);
        by_session[test[i].session_id].second.push_back(test[i].label);
    }
    if (!truth.empty()) {
        const Evaluation e = evaluate(pred, truth);
        report.test_accuracy = e.accuracy;
        report.confusion = e.confusion;
    }
    for (SessionReport& s : report.sessions) {
        auto it = by_session.find(s.session_id);
        if (it == by_session.end()) continue;
        s.n_labeled = it->second.second.size();
        s.accuracy = evaluate(it->second.first, it->second.second).accuracy;
    }
}

}  // namespace

EvalReport run_static(const TrialSet& train, const TrialSet& test, const PipelineConfig& cfg) {
    validate(cfg);
    if (train.empty() || test.empty()) throw InvalidArgument("run_static needs train and test trials");
    if (!train.fully_labeled()) throw InvalidArgument("training set must be fully labeled");

    StepResult step = classify_step(train, test, cfg);
    EvalReport report;
    report.mode = "static";
    report.predicted = step.predicted;
    for (const Trial& t : test.trials()) report.predicted_sessions.push_back(t.session_id);
    for (int sid : test.session_ids()) {
        SessionReport s;
        s.session_id = sid;
        s.n_trials = static_cast<std::size_t>(std::count_if(
            test.trials().begin(), test.trials().end(), [&](const Trial& t) { return t.session_id == sid; }));
        s.train_size = train.size();
        s.config = step.config;
        if (step.search) {
            s.rho = step.search->rho;
            s.penalty = step.search->balance_penalty;
        }
        report.sessions.push_back(std::move(s));
    }
    report.search = std::move(step.search);
    report.train_cv = training_cv(train, step.config);
    score_report(report, test);
    return report;
}

EvalReport run_adaptive(const TrialSet& data, const SplitSpec& initial, const PipelineConfig& cfg) {
    validate(cfg);
    const std::vector<int> sessions = data.session_ids();
    if (sessions.size() < 2) throw InvalidArgument("adaptive classification needs at least 2 sessions");
    auto [train, rest] = split(data, initial);
    if (!train.fully_labeled()) throw InvalidArgument("initial training set must be fully labeled");
    for (const Trial& t : train.trials()) {
        if (t.session_id != sessions.front()) {
            throw InvalidArgument("initial training set must lie within the first session");
        }
    }

    EvalReport report;
    report.mode = "adaptive";
    report.train_cv = training_cv(train, cfg);
    const TrialSet hidden_rest = rest.without_labels();

    for (int sid : sessions) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < hidden_rest.size(); ++i) {
            if (hidden_rest[i].session_id == sid) idx.push_back(i);
        }
        if (idx.empty()) continue;
        const TrialSet target = hidden_rest.subset(idx);

        StepResult step = classify_step(train, target, cfg);
        SessionReport s;
        s.session_id = sid;
        s.n_trials = target.size();
        s.train_size = train.size();
        s.config = step.config;
        if (step.search) {
            s.rho = step.search->rho;
            s.penalty = step.search->balance_penalty;
        }
        report.sessions.push_back(std::move(s));
        report.predicted.insert(report.predicted.end(), step.predicted.begin(), step.predicted.end());
        for (std::size_t k = 0; k < idx.size(); ++k) report.predicted_sessions.push_back(sid);

        train = TrialSet::concat(train, target.with_labels(step.predicted));
    }
    score_report(report, rest);
    return report;
}

std::vector<SweepRow> fraction_sweep(const TrialSet& data, std::span<const double> fractions,
                                     std::span<const std::pair<std::string, PipelineConfig>> methods) {
    std::vector<SweepRow> rows;
    for (const auto& [name, cfg] : methods) {
        for (double f : fractions) {
            const auto [train, test] = split(data, SplitSpec{f, SplitMode::kPrefix});
            const EvalReport r = run_static(train, test, cfg);
            if (!r.test_accuracy) throw InvalidArgument("fraction sweep needs labeled test trials");
            rows.push_back({name, f, train.size(), test.size(), *r.test_accuracy});
        }
    }
    return rows;
}

}  // namespace mibci
