#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace stance {

/// Whole-file read; throws stance::Error if the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Creates parent directories as needed; throws stance::Error on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

std::vector<std::string_view> split_view(std::string_view s, char delim);
std::string_view trim(std::string_view s);

/// Splits on '\n', dropping one trailing '\r' per line. A final newline does
/// not produce an extra empty line.
std::vector<std::string_view> split_lines(std::string_view content);

std::string to_lower(std::string_view s);

}  // namespace stance
