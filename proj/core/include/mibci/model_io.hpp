#pragma once

#include <filesystem>
#include <string>

#include "mibci/bagging.hpp"
#include "mibci/lda.hpp"

namespace mibci {

/// JSON text: {"type":"lda","w":[...],"b":...}. Doubles are written with
/// round-trip precision.
std::string serialize(const LdaModel& model);
/// JSON text: {"type":"bagging","rounds":..,"subset_fraction":..,"seed":..,
/// "components":[{"w":[...],"b":..}, ...]}.
std::string serialize(const BaggingEnsemble& ensemble);

/// Throws IoError on malformed input.
LdaModel parse_lda(const std::string& text);
BaggingEnsemble parse_bagging(const std::string& text);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace mibci
