#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mibci/pipeline.hpp"

namespace mibci {

/// Library version, from the CMake project version.
const char* version() noexcept;

/// Everything needed to rerun a command: the flags as given plus the
/// resolved configuration and seed.
struct RunManifest {
    std::string command;
    std::string config_path;
    std::string resolved_config;  // JSON text, empty if the command has none
    std::uint64_t seed = 0;
    std::map<std::string, std::string> inputs;
    std::map<std::string, std::string> outputs;
    std::map<std::string, std::string> flags;
};

/// Reports are deterministic JSON: same inputs, same bytes.
std::string to_json(const EvalReport& report);
std::string to_json(const CvResult& cv, const PipelineConfig& cfg);
std::string to_json(const RunManifest& manifest);
std::string to_json(const std::vector<SweepRow>& rows);

}  // namespace mibci
