#pragma once

// Private JSON conversions shared by config, report and synthgen code.

#include <nlohmann/json.hpp>

#include "mibci/config.hpp"

namespace mibci::detail {

nlohmann::json to_json_value(const PreprocessConfig& p);
nlohmann::json to_json_value(const SearchSpace& s);
nlohmann::json to_json_value(const PipelineConfig& c);
nlohmann::json pair_json(double a, double b);

nlohmann::json parse_or_throw(const std::string& text, const char* what);

/// Throws InvalidArgument if `obj` has a key outside `allowed`.
void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                         const std::string& context);

}  // namespace mibci::detail
