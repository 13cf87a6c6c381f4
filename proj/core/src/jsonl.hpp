#pragma once

#include <filesystem>
#include "json.hpp"
#include <string>
#include <vector>

namespace dqas::detail {

/// Records of a JSON-lines file; a missing file reads as empty. A final line
/// without its newline is an interrupted append: it is dropped and the file
/// truncated to the last complete record.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

void append_lines(const std::filesystem::path& path, const std::vector<std::string>& lines);

/// Replaces `path` through a temporary file and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace dqas::detail
