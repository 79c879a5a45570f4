#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "medfaith/error.hpp"

namespace medfaith::detail {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

/// Throws Error with `what` context when the field is missing or mistyped.
inline const json& require(const json& object, const char* key) {
  if (!object.is_object() || !object.contains(key)) {
    throw Error(std::string("missing field \"") + key + "\"");
  }
  return object.at(key);
}

inline std::string require_string(const json& object, const char* key) {
  const auto& v = require(object, key);
  if (!v.is_string()) {
    throw Error(std::string("field \"") + key + "\" must be a string");
  }
  return v.get<std::string>();
}

struct Line {
  std::size_t number = 0;  // 1-based
  std::string text;
};

/// Non-blank lines of a text file with their line numbers. Throws Error when
/// the file cannot be opened.
inline std::vector<Line> read_lines(const std::filesystem::path& path,
                                    bool keep_blank = false) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<Line> lines;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (!keep_blank && text.find_first_not_of(" \t") == std::string::npos) {
      continue;
    }
    lines.push_back({number, std::move(text)});
  }
  return lines;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

/// Writes atomically enough for our purposes: truncate + write + check.
inline void write_file(const std::filesystem::path& path, std::string_view data) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error("write failed for " + path.string());
}

inline std::string dump(const ordered_json& j) {
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

}  // namespace medfaith::detail
