#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "weyllab/model_spaces.hpp"

namespace weyllab {

/// 17 significant digits: enough for an exact round trip through text.
std::string format_double(double value);

nlohmann::ordered_json space_to_json(const ModelSpace& space);
/// Accepts {"kind": "interval"|"circle"|"tower"|"gaussian", ...}.
ModelSpace space_from_json(const nlohmann::json& j);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

/// Serializes with doubles rendered via format_double so output bytes do not
/// depend on the JSON library's float formatting.
std::string dump_json(const nlohmann::ordered_json& j);

}  // namespace weyllab
