#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mibci::cli {

struct SynthArgs {
    std::string out;
    std::string config;
    std::optional<std::uint64_t> seed;
};

struct CrossvalArgs {
    std::string data;
    std::string config;
    int folds = 10;
    std::optional<std::uint64_t> seed;
    std::string report;
};

struct RunArgs {
    std::string data;
    double train_fraction = 0.1;
    bool by_session = false;
    std::string config;
    bool sweep = false;
    bool adapt = false;
    std::optional<std::uint64_t> seed;
    std::string report;
};

struct Fig1Args {
    std::string data;
    std::vector<double> fractions{0.8, 0.6, 0.3, 0.2, 0.1};
    std::vector<std::string> methods{"csp", "ar", "lrp"};
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string report;
};

/// Command bodies. They throw mibci::Error subclasses; main maps those to
/// exit codes. `argv_flags` is recorded verbatim in the manifest.
void synth(const SynthArgs& args, const std::vector<std::string>& argv_flags);
void crossval(const CrossvalArgs& args, const std::vector<std::string>& argv_flags);
void run(const RunArgs& args, const std::vector<std::string>& argv_flags);
void fig1(const Fig1Args& args, const std::vector<std::string>& argv_flags);

/// Seed resolution: the flag, else MI_SEED, else nullopt (config value).
std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag);

}  // namespace mibci::cli
