#include "mibci/param_select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mibci/csp.hpp"
#include "mibci/error.hpp"
#include "mibci/filter.hpp"
#include "mibci/folds.hpp"
#include "mibci/lda.hpp"

namespace mibci {

PdfEstimate estimate_pdf(std::span<const double> scores, double lo, double hi) {
    if (scores.empty()) throw InvalidArgument("cannot estimate a pdf from no scores");
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw InvalidArgument("pdf range must satisfy lo < hi");
    }
    PdfEstimate pdf;
    const double width = (hi - lo) / kPdfBins;
    for (int i = 0; i < kPdfBins; ++i) pdf.bin_edges[i] = lo + i * width;
    pdf.bin_edges[kPdfBins] = hi;

    std::array<std::size_t, kPdfBins> counts{};
    for (double s : scores) {
        if (!std::isfinite(s)) throw InvalidArgument("pdf scores must be finite");
        const double pos = std::floor((s - lo) / width);
        const int bin = pos < 0.0 ? 0 : pos >= kPdfBins ? kPdfBins - 1 : static_cast<int>(pos);
        ++counts[bin];
    }
    const auto n = static_cast<double>(scores.size());
    for (int i = 0; i < kPdfBins; ++i) pdf.mass[i] = static_cast<double>(counts[i]) / n;
    return pdf;
}

double class_balance_penalty(std::span<const double> scores) {
    if (scores.empty()) throw InvalidArgument("class balance needs at least one score");
    const auto n_pos = std::count_if(scores.begin(), scores.end(), [](double s) { return s >= 0.0; });
    return std::abs(static_cast<double>(n_pos) / static_cast<double>(scores.size()) - 0.5);
}

double pdf_correlation(const PdfEstimate& train, const PdfEstimate& test) {
    for (int i = 0; i <= kPdfBins; ++i) {
        const double scale = std::max({1.0, std::abs(train.bin_edges[i]), std::abs(test.bin_edges[i])});
        if (std::abs(train.bin_edges[i] - test.bin_edges[i]) > 1e-12 * scale) {
            throw InvalidArgument("pdf correlation needs identical bin edges");
        }
    }
    // Flat means every bin holds the same mass; the variance alone is not a
    // reliable test because the rounded mean leaves a tiny residual.
    const auto flat = [](const std::array<double, kPdfBins>& m) {
        const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
        return *hi - *lo <= 1e-12 * std::max(std::abs(*hi), std::abs(*lo));
    };
    if (flat(train.mass) || flat(test.mass)) {
        throw CriterionUndefined("criterion undefined: flat histogram has no variance across bins");
    }
    double mean_a = 0.0, mean_b = 0.0;
    for (int i = 0; i < kPdfBins; ++i) {
        mean_a += train.mass[i];
        mean_b += test.mass[i];
    }
    mean_a /= kPdfBins;
    mean_b /= kPdfBins;
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (int i = 0; i < kPdfBins; ++i) {
        const double da = train.mass[i] - mean_a;
        const double db = test.mass[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (!(var_a > 0.0) || !(var_b > 0.0)) {
        throw CriterionUndefined("criterion undefined: flat histogram has no variance across bins");
    }
    return std::clamp(cov / std::sqrt(var_a * var_b), -1.0, 1.0);
}

namespace {

struct CandidateInputs {
    std::vector<Eigen::MatrixXd> train_norm;  // X X^T / trace
    std::vector<Eigen::MatrixXd> train_cov;   // sample covariance
    std::vector<Eigen::MatrixXd> test_cov;
};

double projected_feature(const CspModel& model, const Eigen::MatrixXd& cov) {
    const Eigen::VectorXd v = (model.filters * cov).cwiseProduct(model.filters).rowwise().sum();
    return log_variance_ratio(v.head(model.m).sum(), v.tail(model.m).sum());
}

Eigen::MatrixXd sample_covariance(const TrialMoments& mom) {
    const double n = static_cast<double>(mom.n);
    return (mom.scatter - mom.sum * mom.sum.transpose() / n) / (n - 1.0);
}

CspModel fit_on(const CandidateInputs& in, std::span<const Label> labels,
                std::span<const std::size_t> idx, int m) {
    const Eigen::Index c = in.train_norm.front().rows();
    Eigen::MatrixXd neg = Eigen::MatrixXd::Zero(c, c), pos = Eigen::MatrixXd::Zero(c, c);
    int n_neg = 0, n_pos = 0;
    for (std::size_t i : idx) {
        if (labels[i] == Label::kNeg) {
            neg += in.train_norm[i];
            ++n_neg;
        } else {
            pos += in.train_norm[i];
            ++n_pos;
        }
    }
    return fit_csp_covariances(neg / n_neg, pos / n_pos, m);
}

LdaModel fit_scorer(const CandidateInputs& in, const CspModel& csp, std::span<const Label> labels,
                    std::span<const std::size_t> idx) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(idx.size()), 1);
    std::vector<Label> y(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        x(static_cast<Eigen::Index>(k), 0) = projected_feature(csp, in.train_cov[idx[k]]);
        y[k] = labels[idx[k]];
    }
    return fit_lda(x, y);
}

void score_candidate(const CandidateInputs& in, std::span<const Label> labels,
                     const std::vector<std::vector<std::size_t>>& folds, CandidateResult& out) {
    const std::size_t n = labels.size();
    std::vector<double> train_scores(n), test_scores(in.test_cov.size());
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    const CspModel csp = fit_on(in, labels, all, out.m);
    const LdaModel lda = fit_scorer(in, csp, labels, all);
    for (std::size_t i = 0; i < in.test_cov.size(); ++i) {
        test_scores[i] = lda.w(0) * projected_feature(csp, in.test_cov[i]) + lda.b;
    }
    if (folds.empty()) {
        for (std::size_t i = 0; i < n; ++i) {
            train_scores[i] = lda.w(0) * projected_feature(csp, in.train_cov[i]) + lda.b;
        }
    } else {
        for (const auto& held : folds) {
            const auto fit_idx = complement(held, n);
            const CspModel fold_csp = fit_on(in, labels, fit_idx, out.m);
            const LdaModel fold_lda = fit_scorer(in, fold_csp, labels, fit_idx);
            for (std::size_t i : held) {
                train_scores[i] = fold_lda.w(0) * projected_feature(fold_csp, in.train_cov[i]) + fold_lda.b;
            }
        }
    }

    out.penalty = class_balance_penalty(test_scores);
    const auto [tr_lo, tr_hi] = std::minmax_element(train_scores.begin(), train_scores.end());
    const auto [te_lo, te_hi] = std::minmax_element(test_scores.begin(), test_scores.end());
    const double lo = std::min(*tr_lo, *te_lo);
    const double hi = std::max(*tr_hi, *te_hi);
    if (!(hi > lo)) throw CriterionUndefined("criterion undefined: all scores coincide");
    out.rho = pdf_correlation(estimate_pdf(train_scores, lo, hi), estimate_pdf(test_scores, lo, hi));
    out.feasible = *out.penalty <= kBalanceGate;
}

}  // namespace

SearchResult grid_search(const TrialSet& train, const TrialSet& test_unlabeled,
                         const SearchSpace& space, const PipelineConfig& base) {
    validate(space);
    if (train.empty() || test_unlabeled.empty()) {
        throw InvalidArgument("grid search needs nonempty training and test sets");
    }
    if (!train.fully_labeled()) throw InvalidArgument("grid search training set must be labeled");
    if (train.channels() != test_unlabeled.channels() ||
        train.samples() != test_unlabeled.samples() ||
        train.sampling_rate_hz() != test_unlabeled.sampling_rate_hz()) {
        throw InvalidArgument("training and test sets have different layouts");
    }
    const double fs = train.sampling_rate_hz();
    const Eigen::Index n_samples = train.samples();
    const PreprocessConfig& chain = csp_chain(base);

    for (const auto& set : space.channel_sets) {
        for (int ch : set) {
            if (ch < 0 || ch >= train.channels()) {
                throw InvalidArgument("search channel index " + std::to_string(ch) + " out of range");
            }
        }
    }

    // Every window is a union of consecutive segments between boundaries, so
    // moments are accumulated once per segment and reused across windows.
    std::vector<SampleRange> ranges;
    std::vector<Eigen::Index> bounds;
    for (const TimeWindow& w : space.windows_s) {
        const SampleRange r = window_samples(w, fs, n_samples);
        ranges.push_back(r);
        bounds.push_back(r.first);
        bounds.push_back(r.first + r.count);
    }
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
    auto bound_index = [&](Eigen::Index v) {
        return static_cast<std::size_t>(std::lower_bound(bounds.begin(), bounds.end(), v) - bounds.begin());
    };

    const std::vector<Label> labels = train.labels();
    const auto n_neg = static_cast<int>(std::count(labels.begin(), labels.end(), Label::kNeg));
    const int n_pos = static_cast<int>(labels.size()) - n_neg;
    if (std::min(n_neg, n_pos) < 2) {
        throw InvalidArgument("grid search needs at least 2 training trials per class");
    }
    std::vector<std::vector<std::size_t>> folds;
    if (space.train_scoring == TrainScoring::kCrossValidated) {
        folds = stratified_folds(labels, std::min({10, n_neg, n_pos}), base.ensemble.seed);
    }

    const std::size_t n_train = train.size();
    const std::size_t n_total = n_train + test_unlabeled.size();
    auto trial_at = [&](std::size_t i) -> const Trial& {
        return i < n_train ? train[i] : test_unlabeled[i - n_train];
    };

    SearchResult result;
    for (const Band& band : space.bands_hz) {
        // seg[t][s]: moments of trial t between bounds[s] and bounds[s + 1].
        std::vector<std::vector<TrialMoments>> seg(n_total);
        std::string band_error;
        try {
            const SosFilter filt = butter_bandpass(kFilterOrder, band.low_hz, band.high_hz, fs);
            Signal buf(train.channels(), n_samples);
            for (std::size_t t = 0; t < n_total; ++t) {
                const Trial& src = trial_at(t);
                const Signal& in = chain.spatial_ref == SpatialRef::kCar
                                       ? common_average_reference(src).data
                                       : src.data;
                for (Eigen::Index c = 0; c < in.rows(); ++c) {
                    const auto n = static_cast<std::size_t>(n_samples);
                    filt.filtfilt({in.row(c).data(), n}, {buf.row(c).data(), n});
                }
                seg[t].reserve(bounds.size() - 1);
                for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
                    seg[t].push_back(moments(buf, bounds[s], bounds[s + 1] - bounds[s]));
                }
            }
        } catch (const Error& e) {
            band_error = e.what();
        }

        for (std::size_t wi = 0; wi < space.windows_s.size(); ++wi) {
            std::vector<TrialMoments> win(n_total);
            if (band_error.empty()) {
                const std::size_t s0 = bound_index(ranges[wi].first);
                const std::size_t s1 = bound_index(ranges[wi].first + ranges[wi].count);
                for (std::size_t t = 0; t < n_total; ++t) {
                    win[t] = seg[t][s0];
                    for (std::size_t s = s0 + 1; s < s1; ++s) win[t] += seg[t][s];
                }
            }
            for (const auto& chans : space.channel_sets) {
                CandidateInputs in;
                std::string prep_error = band_error;
                if (prep_error.empty()) {
                    try {
                        for (std::size_t t = 0; t < n_total; ++t) {
                            const TrialMoments mom = chans.empty() ? win[t] : win[t].select(chans);
                            const double tr = mom.scatter.trace();
                            if (!(tr > 0.0)) throw NumericalError("trial has zero energy in band");
                            if (t < n_train) {
                                in.train_norm.push_back(mom.scatter / tr);
                                in.train_cov.push_back(sample_covariance(mom));
                            } else {
                                in.test_cov.push_back(sample_covariance(mom));
                            }
                        }
                    } catch (const Error& e) {
                        prep_error = e.what();
                    }
                }
                for (int m : space.m_values) {
                    CandidateResult cand;
                    cand.band = band;
                    cand.window = space.windows_s[wi];
                    cand.channels = chans;
                    cand.m = m;
                    if (!prep_error.empty()) {
                        cand.error = prep_error;
                    } else {
                        try {
                            score_candidate(in, labels, folds, cand);
                        } catch (const Error& e) {
                            cand.error = e.what();
                            cand.feasible = false;
                        }
                    }
                    result.table.push_back(std::move(cand));
                }
            }
        }
    }

    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < result.table.size(); ++i) {
        const auto& c = result.table[i];
        if (c.feasible && c.rho && (!best || *c.rho > *result.table[*best].rho)) best = i;
    }
    if (!best) {
        double best_obj = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < result.table.size(); ++i) {
            const auto& c = result.table[i];
            if (c.rho && c.penalty && *c.rho - *c.penalty > best_obj) {
                best_obj = *c.rho - *c.penalty;
                best = i;
            }
        }
    }
    if (!best) {
        std::string msg = "grid search: no candidate could be scored";
        for (const auto& c : result.table) {
            msg += "\n  [" + std::to_string(c.band.low_hz) + "-" + std::to_string(c.band.high_hz) +
                   " Hz, " + std::to_string(c.window.start_s) + "-" + std::to_string(c.window.end_s) +
                   " s, m=" + std::to_string(c.m) + "] " + c.error;
        }
        throw NumericalError(msg);
    }

    const CandidateResult& win = result.table[*best];
    result.winner = *best;
    result.rho = *win.rho;
    result.balance_penalty = *win.penalty;
    result.config = base;
    PreprocessConfig& out_chain = csp_chain(result.config);
    out_chain.band_hz = win.band;
    out_chain.window_s = win.window;
    result.config.channels = win.channels;
    result.config.m = win.m;
    result.config.search.reset();
    return result;
}

}  // namespace mibci
