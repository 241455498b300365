#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace msc::text {

std::string_view trim(std::string_view s);

std::vector<std::string_view> split_lines(std::string_view text);

std::vector<std::string_view> split(std::string_view s, char sep);

bool starts_with_ci(std::string_view s, std::string_view prefix);

bool equals_ci(std::string_view a, std::string_view b);

std::string to_lower(std::string_view s);

// Returns the byte offset of the first invalid sequence, or nullopt when
// the whole input is well-formed UTF-8.
std::optional<std::size_t> find_invalid_utf8(std::string_view s);

// Decodes one code point starting at s[pos] and advances pos. The input
// must already be valid UTF-8.
char32_t decode_utf8(std::string_view s, std::size_t& pos);

void append_utf8(std::string& out, char32_t cp);

std::string read_file(const std::string& path);

void write_file(const std::string& path, std::string_view content);

}  // namespace msc::text
