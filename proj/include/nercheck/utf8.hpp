#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace nercheck::utf8 {

// Byte offset of every code point in `text`, plus a final entry equal to
// text.size(). Invalid lead bytes are treated as single-byte code points.
std::vector<std::size_t> byte_index(std::string_view text);

// Number of code points in `text`.
std::size_t length(std::string_view text);

// Slice [cp_begin, cp_end) measured in code points.
std::string slice(std::string_view text, std::size_t cp_begin, std::size_t cp_end);

// Byte offset of code point `cp`; text.size() when cp == length(text).
std::size_t byte_offset(std::string_view text, std::size_t cp);

}  // namespace nercheck::utf8
