#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace tabqa {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

std::string base64_encode(std::string_view bytes);

/// Whole-file read/write. Both throw IoError.
std::string read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

/// Collapses whitespace runs to a single space and trims both ends.
std::string normalize_whitespace(std::string_view text);

std::string to_lower_ascii(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);

// Newline-delimited JSON. Reading skips blank lines; a torn trailing line
// (no newline, unparseable) is ignored so that an interrupted writer never
// poisons the store.
std::vector<json> read_json_lines(const std::filesystem::path& path);
void append_json_line(const std::filesystem::path& path, const json& record);
void write_json_lines(const std::filesystem::path& path, std::span<const json> records);

/// Runs `task(i)` for i in [0, count) on at most `max_parallel` threads.
/// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t max_parallel,
                  const std::function<void(std::size_t)>& task);

}  // namespace tabqa
