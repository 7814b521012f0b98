#include "commands.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>

#include "mibci/archive.hpp"
#include "mibci/error.hpp"
#include "mibci/model_io.hpp"
#include "mibci/pipeline.hpp"
#include "mibci/report.hpp"
#include "mibci/synthgen.hpp"

namespace fs = std::filesystem;

namespace mibci::cli {
namespace {

std::string flags_line(const std::vector<std::string>& argv_flags) {
    std::string out;
    for (const auto& a : argv_flags) {
        if (!out.empty()) out += ' ';
        out += a;
    }
    return out;
}

PipelineConfig load_pipeline_config(const std::string& path) {
    if (path.empty()) return default_config(FeatureMethod::kCsp);
    try {
        return parse_pipeline_config(read_text_file(path));
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(path + ": " + e.what());
    }
}

// The report's manifest sits beside it: out.json -> out.manifest.json.
fs::path manifest_path_for(const fs::path& report) {
    fs::path p = report;
    p.replace_extension();
    return p.string() + ".manifest.json";
}

void write_manifest(const fs::path& where, RunManifest m, const std::vector<std::string>& argv_flags) {
    m.flags["argv"] = flags_line(argv_flags);
    write_text_file(where, to_json(m) + "\n");
}

void check_report_path(const std::string& report) {
    if (report.empty()) throw InvalidArgument("--report is required");
}

}  // namespace

std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return flag;
    const char* env = std::getenv("MI_SEED");
    if (env == nullptr || *env == '\0') return std::nullopt;
    std::uint64_t v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, v);
    if (ec != std::errc() || ptr != end) {
        throw InvalidArgument(std::string("MI_SEED is not an unsigned integer: ") + env);
    }
    return v;
}

void synth(const SynthArgs& args, const std::vector<std::string>& argv_flags) {
    SynthConfig cfg;
    if (!args.config.empty()) {
        try {
            cfg = parse_synth_config(read_text_file(args.config));
        } catch (const InvalidArgument& e) {
            throw InvalidArgument(args.config + ": " + e.what());
        }
    }
    if (const auto seed = resolve_seed(args.seed)) cfg.seed = *seed;
    const TrialSet set = generate(cfg);
    save_archive(set, args.out);

    RunManifest m;
    m.command = "synth";
    m.config_path = args.config;
    m.resolved_config = to_json(cfg);
    m.seed = cfg.seed;
    m.outputs["archive"] = args.out;
    write_manifest(fs::path(args.out) / "manifest.json", m, argv_flags);
    std::cout << "wrote " << set.size() << " trials (" << set.session_ids().size() << " sessions, "
              << set.channels() << " channels) to " << args.out << "\n";
}

void crossval(const CrossvalArgs& args, const std::vector<std::string>& argv_flags) {
    check_report_path(args.report);
    PipelineConfig cfg = load_pipeline_config(args.config);
    if (const auto seed = resolve_seed(args.seed)) cfg.ensemble.seed = *seed;
    if (args.folds < 2) throw InvalidArgument("--folds must be >= 2");
    const TrialSet data = load_archive(args.data);

    std::vector<std::size_t> labeled;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (is_labeled(data[i].label)) labeled.push_back(i);
    }
    if (static_cast<std::size_t>(args.folds) > labeled.size()) {
        throw InvalidArgument("--folds " + std::to_string(args.folds) + " exceeds the " +
                              std::to_string(labeled.size()) + " labeled trials");
    }
    const CvResult cv = cross_validate(data.subset(labeled), cfg, args.folds, cfg.ensemble.seed);
    write_text_file(args.report, to_json(cv, cfg) + "\n");

    RunManifest m;
    m.command = "crossval";
    m.config_path = args.config;
    m.resolved_config = to_json(cfg);
    m.seed = cfg.ensemble.seed;
    m.inputs["data"] = args.data;
    m.outputs["report"] = args.report;
    m.flags["folds"] = std::to_string(args.folds);
    write_manifest(manifest_path_for(args.report), m, argv_flags);
    std::cout << "cross-validation (" << cv.folds << " folds): " << cv.mean << " +/- " << cv.std << " %\n";
}

void run(const RunArgs& args, const std::vector<std::string>& argv_flags) {
    check_report_path(args.report);
    PipelineConfig cfg = load_pipeline_config(args.config);
    if (const auto seed = resolve_seed(args.seed)) cfg.ensemble.seed = *seed;
    if (args.adapt) cfg.adapt = true;
    const TrialSet data = load_archive(args.data);
    if (args.sweep && !cfg.search) {
        cfg.search = default_search_space(data.duration_s(), data.sampling_rate_hz(), cfg.m);
    }
    validate(cfg);

    const SplitSpec spec{args.train_fraction, args.by_session ? SplitMode::kBySession : SplitMode::kPrefix};
    EvalReport report;
    if (cfg.adapt) {
        if (data.session_ids().size() < 2) {
            throw InvalidArgument("--adapt needs an archive with at least 2 sessions");
        }
        report = run_adaptive(data, spec, cfg);
    } else {
        const auto [train, test] = split(data, spec);
        report = run_static(train, test, cfg);
    }
    write_text_file(args.report, to_json(report) + "\n");

    RunManifest m;
    m.command = "run";
    m.config_path = args.config;
    m.resolved_config = to_json(cfg);
    m.seed = cfg.ensemble.seed;
    m.inputs["data"] = args.data;
    m.outputs["report"] = args.report;
    m.flags["train_fraction"] = std::to_string(args.train_fraction);
    m.flags["by_session"] = args.by_session ? "true" : "false";
    m.flags["sweep"] = args.sweep ? "true" : "false";
    m.flags["adapt"] = cfg.adapt ? "true" : "false";
    write_manifest(manifest_path_for(args.report), m, argv_flags);

    std::cout << report.mode << " run";
    if (report.test_accuracy) std::cout << ": test accuracy " << *report.test_accuracy << " %";
    std::cout << "\n";
    for (const SessionReport& s : report.sessions) {
        std::cout << "  session " << s.session_id << ": " << s.n_trials << " trials";
        if (s.accuracy) std::cout << ", " << *s.accuracy << " %";
        if (s.rho) std::cout << ", rho " << *s.rho << ", penalty " << *s.penalty;
        std::cout << "\n";
    }
}

void fig1(const Fig1Args& args, const std::vector<std::string>& argv_flags) {
    check_report_path(args.report);
    if (args.fractions.empty()) throw InvalidArgument("--fractions must not be empty");
    for (double f : args.fractions) {
        if (!(f > 0.0 && f < 1.0)) {
            throw InvalidArgument("--fractions entries must lie in (0, 1), got " + std::to_string(f));
        }
    }
    if (args.methods.empty()) throw InvalidArgument("--methods must not be empty");
    const PipelineConfig base = load_pipeline_config(args.config);
    const auto seed = resolve_seed(args.seed);

    // "ar-1ch" = AR with Fisher selection of 1 channel; a bare name keeps the
    // config's n_channels.
    std::vector<std::pair<std::string, PipelineConfig>> methods;
    for (const std::string& name : args.methods) {
        const auto dash = name.find('-');
        PipelineConfig cfg = default_config(parse_method(name.substr(0, dash)));
        cfg.ensemble = base.ensemble;
        cfg.n_channels = base.n_channels;
        cfg.ar_order = base.ar_order;
        cfg.m = base.m;
        cfg.cv_folds = 0;
        if (seed) cfg.ensemble.seed = *seed;
        if (dash != std::string::npos) {
            const std::string suffix = name.substr(dash + 1);
            int n = 0;
            const auto [ptr, ec] = std::from_chars(suffix.data(), suffix.data() + suffix.size(), n);
            if (ec != std::errc() || std::string_view(ptr) != "ch" || n < 1) {
                throw InvalidArgument("method \"" + name + "\": expected NAME or NAME-<N>ch");
            }
            cfg.n_channels = n;
        }
        validate(cfg);
        methods.emplace_back(name, std::move(cfg));
    }

    const TrialSet data = load_archive(args.data);
    const auto rows = fraction_sweep(data, args.fractions, methods);
    write_text_file(args.report, to_json(rows) + "\n");

    RunManifest m;
    m.command = "fig1";
    m.config_path = args.config;
    m.resolved_config = to_json(methods.front().second);
    m.seed = methods.front().second.ensemble.seed;
    m.inputs["data"] = args.data;
    m.outputs["report"] = args.report;
    write_manifest(manifest_path_for(args.report), m, argv_flags);

    for (const SweepRow& r : rows) {
        std::cout << r.method << "\t" << r.fraction << "\t" << r.accuracy << "\n";
    }
}

}  // namespace mibci::cli
