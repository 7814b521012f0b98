#include "mibci/config.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "json_util.hpp"
#include "mibci/error.hpp"

namespace mibci {
using nlohmann::json;

PreprocessConfig default_preprocess(FeatureMethod method) {
    PreprocessConfig p;
    switch (method) {
        case FeatureMethod::kCsp:
        case FeatureMethod::kCombined:
            p.band_hz = Band{12.0, 14.0};
            p.window_s = {0.5, 4.5};
            break;
        case FeatureMethod::kAr:
            p.band_hz = Band{8.0, 35.0};
            p.spatial_ref = SpatialRef::kCar;
            p.window_s = {0.5, 4.5};
            break;
        case FeatureMethod::kLrp:
            p.lowpass_hz = 1.5;
            p.baseline_window_s = TimeWindow{0.0, 0.5};
            p.window_s = {0.5, 1.5};
            break;
    }
    return p;
}

PipelineConfig default_config(FeatureMethod method) {
    PipelineConfig c;
    c.method = method;
    c.preprocess = default_preprocess(method);
    c.chains = {default_preprocess(FeatureMethod::kCsp), default_preprocess(FeatureMethod::kAr),
                default_preprocess(FeatureMethod::kLrp)};
    return c;
}

const PreprocessConfig& csp_chain(const PipelineConfig& cfg) {
    return cfg.method == FeatureMethod::kCombined ? cfg.chains.csp : cfg.preprocess;
}

PreprocessConfig& csp_chain(PipelineConfig& cfg) {
    return cfg.method == FeatureMethod::kCombined ? cfg.chains.csp : cfg.preprocess;
}

SearchSpace default_search_space(double trial_duration_s, double fs_hz, int m) {
    SearchSpace s;
    for (int low = 8; low + 2 <= 30; ++low) {
        if (low + 2.0 < fs_hz / 2.0) s.bands_hz.push_back({double(low), double(low + 2)});
    }
    if (35.0 < fs_hz / 2.0) s.bands_hz.push_back({8.0, 35.0});
    for (double len = 2.0; len <= 4.0 + 1e-9; len += 0.5) {
        for (double start = 0.0; start + len <= trial_duration_s + 1e-9; start += 0.5) {
            s.windows_s.push_back({start, start + len});
        }
    }
    s.channel_sets = {{}};
    s.m_values = {m};
    return s;
}

void validate(const SearchSpace& s) {
    if (s.bands_hz.empty()) throw InvalidArgument("search.bands_hz must not be empty");
    if (s.windows_s.empty()) throw InvalidArgument("search.windows_s must not be empty");
    if (s.channel_sets.empty()) throw InvalidArgument("search.channel_sets must not be empty");
    if (s.m_values.empty()) throw InvalidArgument("search.m_values must not be empty");
    for (const Band& b : s.bands_hz) {
        if (!(b.low_hz > 0.0 && b.low_hz < b.high_hz)) {
            throw InvalidArgument("search.bands_hz: every band needs 0 < low < high");
        }
    }
    for (const TimeWindow& w : s.windows_s) {
        if (!(w.start_s >= 0.0 && w.start_s < w.end_s)) {
            throw InvalidArgument("search.windows_s: every window needs 0 <= start < end");
        }
    }
    for (int m : s.m_values) {
        if (m < 1) throw InvalidArgument("search.m_values: entries must be >= 1");
    }
}

void validate(const PipelineConfig& c) {
    if (c.m < 1) throw InvalidArgument("m must be >= 1");
    if (c.ar_order < 1) throw InvalidArgument("ar_order must be >= 1");
    if (c.n_channels < 1) throw InvalidArgument("n_channels must be >= 1");
    for (int ch : c.channels) {
        if (ch < 0) throw InvalidArgument("channels: indices must be >= 0");
    }
    if (c.ensemble.rounds < 1) throw InvalidArgument("ensemble.rounds must be >= 1");
    if (!(c.ensemble.subset_fraction > 0.0 && c.ensemble.subset_fraction <= 1.0)) {
        throw InvalidArgument("ensemble.subset_fraction must lie in (0, 1]");
    }
    if (c.cv_folds < 0 || c.cv_folds == 1) throw InvalidArgument("cv_folds must be 0 or >= 2");
    auto check_chain = [](const PreprocessConfig& p, const std::string& name) {
        if (p.band_hz && !(p.band_hz->low_hz > 0.0 && p.band_hz->low_hz < p.band_hz->high_hz)) {
            throw InvalidArgument(name + ".band_hz needs 0 < low < high");
        }
        if (p.lowpass_hz && !(*p.lowpass_hz > 0.0)) {
            throw InvalidArgument(name + ".lowpass_hz must be > 0");
        }
        if (!(p.window_s.start_s >= 0.0 && p.window_s.start_s < p.window_s.end_s)) {
            throw InvalidArgument(name + ".window_s needs 0 <= start < end");
        }
    };
    if (c.method == FeatureMethod::kCombined) {
        check_chain(c.chains.csp, "chains.csp");
        check_chain(c.chains.ar, "chains.ar");
        check_chain(c.chains.lrp, "chains.lrp");
    } else {
        check_chain(c.preprocess, "preprocess");
    }
    if (c.search) {
        if (c.method != FeatureMethod::kCsp && c.method != FeatureMethod::kCombined) {
            throw InvalidArgument("search tunes the CSP chain and needs method csp or combined");
        }
        validate(*c.search);
    }
}

namespace detail {

json pair_json(double a, double b) { return json::array({a, b}); }

json to_json_value(const PreprocessConfig& p) {
    json j;
    j["band_hz"] = p.band_hz ? pair_json(p.band_hz->low_hz, p.band_hz->high_hz) : json(nullptr);
    j["lowpass_hz"] = p.lowpass_hz ? json(*p.lowpass_hz) : json(nullptr);
    j["spatial_ref"] = p.spatial_ref == SpatialRef::kCar ? "car" : "none";
    j["window_s"] = pair_json(p.window_s.start_s, p.window_s.end_s);
    j["baseline_window_s"] = p.baseline_window_s
                                 ? pair_json(p.baseline_window_s->start_s, p.baseline_window_s->end_s)
                                 : json(nullptr);
    return j;
}

json to_json_value(const SearchSpace& s) {
    json bands = json::array(), windows = json::array();
    for (const Band& b : s.bands_hz) bands.push_back(pair_json(b.low_hz, b.high_hz));
    for (const TimeWindow& w : s.windows_s) windows.push_back(pair_json(w.start_s, w.end_s));
    return {{"bands_hz", bands},
            {"windows_s", windows},
            {"channel_sets", s.channel_sets},
            {"m_values", s.m_values},
            {"train_scoring",
             s.train_scoring == TrainScoring::kResubstitution ? "resubstitution" : "cross_validated"}};
}

json to_json_value(const PipelineConfig& c) {
    json j;
    j["method"] = std::string(to_string(c.method));
    if (c.method == FeatureMethod::kCombined) {
        j["chains"] = {{"csp", to_json_value(c.chains.csp)},
                       {"ar", to_json_value(c.chains.ar)},
                       {"lrp", to_json_value(c.chains.lrp)}};
    } else {
        j["preprocess"] = to_json_value(c.preprocess);
    }
    j["m"] = c.m;
    j["ar_order"] = c.ar_order;
    j["n_channels"] = c.n_channels;
    j["channels"] = c.channels;
    j["ensemble"] = {{"rounds", c.ensemble.rounds},
                     {"subset_fraction", c.ensemble.subset_fraction},
                     {"seed", c.ensemble.seed}};
    j["adapt"] = c.adapt;
    j["cv_folds"] = c.cv_folds;
    j["search"] = c.search ? to_json_value(*c.search) : json(nullptr);
    return j;
}

json parse_or_throw(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string(what) + " is not valid JSON: " + e.what());
    }
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& context) {
    if (!obj.is_object()) throw InvalidArgument(context + " must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return it.key() == k; });
        if (!known) {
            throw InvalidArgument("unknown field \"" + (context.empty() ? "" : context + ".") +
                                  it.key() + "\"");
        }
    }
}

}  // namespace detail

namespace {

template <typename T>
T field(const json& obj, const char* key, const std::string& ctx, T fallback) {
    if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidArgument("field \"" + (ctx.empty() ? "" : ctx + ".") + key + "\" has the wrong type");
    }
}

std::pair<double, double> parse_pair(const json& j, const std::string& name) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw InvalidArgument("field \"" + name + "\" must be a two-number array");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

PreprocessConfig parse_preprocess(const json& j, PreprocessConfig p, const std::string& ctx) {
    detail::reject_unknown_keys(
        j, {"band_hz", "lowpass_hz", "spatial_ref", "window_s", "baseline_window_s"}, ctx);
    if (j.contains("band_hz")) {
        if (j["band_hz"].is_null()) {
            p.band_hz.reset();
        } else {
            auto [lo, hi] = parse_pair(j["band_hz"], ctx + ".band_hz");
            p.band_hz = Band{lo, hi};
        }
    }
    if (j.contains("lowpass_hz")) {
        if (j["lowpass_hz"].is_null()) {
            p.lowpass_hz.reset();
        } else if (j["lowpass_hz"].is_number()) {
            p.lowpass_hz = j["lowpass_hz"].get<double>();
        } else {
            throw InvalidArgument("field \"" + ctx + ".lowpass_hz\" must be a number or null");
        }
    }
    if (j.contains("spatial_ref")) {
        const auto ref = field<std::string>(j, "spatial_ref", ctx, "none");
        if (ref == "car" || ref == "CAR") {
            p.spatial_ref = SpatialRef::kCar;
        } else if (ref == "none") {
            p.spatial_ref = SpatialRef::kNone;
        } else {
            throw InvalidArgument("field \"" + ctx + ".spatial_ref\" must be \"none\" or \"car\"");
        }
    }
    if (j.contains("window_s")) {
        auto [a, b] = parse_pair(j["window_s"], ctx + ".window_s");
        p.window_s = {a, b};
    }
    if (j.contains("baseline_window_s")) {
        if (j["baseline_window_s"].is_null()) {
            p.baseline_window_s.reset();
        } else {
            auto [a, b] = parse_pair(j["baseline_window_s"], ctx + ".baseline_window_s");
            p.baseline_window_s = TimeWindow{a, b};
        }
    }
    return p;
}

SearchSpace parse_search(const json& j) {
    detail::reject_unknown_keys(j, {"bands_hz", "windows_s", "channel_sets", "m_values", "train_scoring"},
                                "search");
    SearchSpace s;
    if (j.contains("bands_hz")) {
        for (const json& b : j["bands_hz"]) {
            auto [lo, hi] = parse_pair(b, "search.bands_hz");
            s.bands_hz.push_back({lo, hi});
        }
    }
    if (j.contains("windows_s")) {
        for (const json& w : j["windows_s"]) {
            auto [a, b] = parse_pair(w, "search.windows_s");
            s.windows_s.push_back({a, b});
        }
    }
    s.channel_sets = field<std::vector<std::vector<int>>>(j, "channel_sets", "search", {{}});
    s.m_values = field<std::vector<int>>(j, "m_values", "search", {});
    const auto scoring = field<std::string>(j, "train_scoring", "search", "resubstitution");
    if (scoring == "resubstitution") {
        s.train_scoring = TrainScoring::kResubstitution;
    } else if (scoring == "cross_validated") {
        s.train_scoring = TrainScoring::kCrossValidated;
    } else {
        throw InvalidArgument("field \"search.train_scoring\" must be \"resubstitution\" or \"cross_validated\"");
    }
    return s;
}

}  // namespace

PipelineConfig parse_pipeline_config(const std::string& text) {
    const json j = detail::parse_or_throw(text, "pipeline config");
    detail::reject_unknown_keys(j,
                                {"method", "preprocess", "chains", "m", "ar_order", "n_channels",
                                 "channels", "ensemble", "adapt", "search", "cv_folds"},
                                "");
    const auto method = parse_method(field<std::string>(j, "method", "", "csp"));
    PipelineConfig c = default_config(method);
    if (j.contains("preprocess") && !j["preprocess"].is_null()) {
        c.preprocess = parse_preprocess(j["preprocess"], c.preprocess, "preprocess");
    }
    if (j.contains("chains") && !j["chains"].is_null()) {
        const json& ch = j["chains"];
        detail::reject_unknown_keys(ch, {"csp", "ar", "lrp"}, "chains");
        if (ch.contains("csp")) c.chains.csp = parse_preprocess(ch["csp"], c.chains.csp, "chains.csp");
        if (ch.contains("ar")) c.chains.ar = parse_preprocess(ch["ar"], c.chains.ar, "chains.ar");
        if (ch.contains("lrp")) c.chains.lrp = parse_preprocess(ch["lrp"], c.chains.lrp, "chains.lrp");
    }
    c.m = field<int>(j, "m", "", c.m);
    c.ar_order = field<int>(j, "ar_order", "", c.ar_order);
    c.n_channels = field<int>(j, "n_channels", "", c.n_channels);
    c.channels = field<std::vector<int>>(j, "channels", "", c.channels);
    if (j.contains("ensemble") && !j["ensemble"].is_null()) {
        const json& e = j["ensemble"];
        detail::reject_unknown_keys(e, {"rounds", "subset_fraction", "seed"}, "ensemble");
        c.ensemble.rounds = field<int>(e, "rounds", "ensemble", c.ensemble.rounds);
        c.ensemble.subset_fraction =
            field<double>(e, "subset_fraction", "ensemble", c.ensemble.subset_fraction);
        c.ensemble.seed = field<std::uint64_t>(e, "seed", "ensemble", c.ensemble.seed);
    }
    c.adapt = field<bool>(j, "adapt", "", c.adapt);
    c.cv_folds = field<int>(j, "cv_folds", "", c.cv_folds);
    if (j.contains("search") && !j["search"].is_null()) {
        c.search = parse_search(j["search"]);
        if (c.search->m_values.empty()) c.search->m_values = {c.m};
    }
    validate(c);
    return c;
}

std::string to_json(const PipelineConfig& cfg) { return detail::to_json_value(cfg).dump(2); }

}  // namespace mibci
