#include "mibci/report.hpp"

#include "json_util.hpp"

#ifndef MIBCI_VERSION
#define MIBCI_VERSION "0.0.0"
#endif

namespace mibci {
using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json labels_json(const std::vector<Label>& labels) {
    json out = json::array();
    for (Label l : labels) out.push_back(to_int(l));
    return out;
}

json cv_json(const CvResult& cv) {
    return {{"mean", cv.mean}, {"std", cv.std}, {"folds", cv.folds}, {"fold_accuracies", cv.fold_accuracies}};
}

json chosen_params(const PipelineConfig& cfg) {
    const PreprocessConfig& chain = csp_chain(cfg);
    json j;
    j["method"] = std::string(to_string(cfg.method));
    j["band_hz"] = chain.band_hz ? detail::pair_json(chain.band_hz->low_hz, chain.band_hz->high_hz)
                                 : json(nullptr);
    j["window_s"] = detail::pair_json(chain.window_s.start_s, chain.window_s.end_s);
    j["channels"] = cfg.channels;
    j["m"] = cfg.m;
    return j;
}

json search_json(const SearchResult& s) {
    json rows = json::array();
    for (const CandidateResult& c : s.table) {
        json r;
        r["band_hz"] = detail::pair_json(c.band.low_hz, c.band.high_hz);
        r["window_s"] = detail::pair_json(c.window.start_s, c.window.end_s);
        r["channels"] = c.channels;
        r["m"] = c.m;
        r["rho"] = optional_number(c.rho);
        r["penalty"] = optional_number(c.penalty);
        r["feasible"] = c.feasible;
        if (!c.error.empty()) r["error"] = c.error;
        rows.push_back(std::move(r));
    }
    return {{"winner", s.winner}, {"rho", s.rho}, {"penalty", s.balance_penalty}, {"candidates", rows}};
}

}  // namespace

const char* version() noexcept { return MIBCI_VERSION; }

std::string to_json(const EvalReport& r) {
    json j;
    j["mode"] = r.mode;
    j["test_accuracy"] = optional_number(r.test_accuracy);
    j["train_accuracy_mean"] = r.train_cv ? json(r.train_cv->mean) : json(nullptr);
    j["train_accuracy_std"] = r.train_cv ? json(r.train_cv->std) : json(nullptr);
    j["train_cv"] = r.train_cv ? cv_json(*r.train_cv) : json(nullptr);
    j["confusion"] = {{"neg_as_neg", r.confusion.neg_as_neg},
                      {"neg_as_pos", r.confusion.neg_as_pos},
                      {"pos_as_neg", r.confusion.pos_as_neg},
                      {"pos_as_pos", r.confusion.pos_as_pos},
                      {"total", r.confusion.total()}};
    json sessions = json::array();
    bool combined = false;
    for (const SessionReport& s : r.sessions) {
        combined = combined || s.config.method == FeatureMethod::kCombined;
        sessions.push_back({{"session_id", s.session_id},
                            {"n_trials", s.n_trials},
                            {"n_labeled", s.n_labeled},
                            {"train_size", s.train_size},
                            {"accuracy", optional_number(s.accuracy)},
                            {"params", chosen_params(s.config)},
                            {"rho", optional_number(s.rho)},
                            {"penalty", optional_number(s.penalty)}});
    }
    j["sessions"] = sessions;
    j["predicted"] = labels_json(r.predicted);
    j["predicted_sessions"] = r.predicted_sessions;
    j["search"] = r.search ? search_json(*r.search) : json(nullptr);
    j["notes"] = json::array();
    if (combined) {
        j["notes"].push_back("combined method: per-method features concatenated into one LDA/bagging model");
    }
    return j.dump(2);
}

std::string to_json(const CvResult& cv, const PipelineConfig& cfg) {
    json j = cv_json(cv);
    j["config"] = detail::to_json_value(cfg);
    return j.dump(2);
}

std::string to_json(const RunManifest& m) {
    json j;
    j["command"] = m.command;
    j["config_path"] = m.config_path;
    j["config"] = m.resolved_config.empty() ? json(nullptr) : json::parse(m.resolved_config);
    j["seed"] = m.seed;
    j["inputs"] = m.inputs;
    j["outputs"] = m.outputs;
    j["flags"] = m.flags;
    j["tool_version"] = version();
    return j.dump(2);
}

std::string to_json(const std::vector<SweepRow>& rows) {
    json table = json::array();
    for (const SweepRow& r : rows) {
        table.push_back({{"method", r.method},
                         {"fraction", r.fraction},
                         {"train_size", r.train_size},
                         {"test_size", r.test_size},
                         {"accuracy", r.accuracy}});
    }
    return json{{"rows", table}}.dump(2);
}

}  // namespace mibci
