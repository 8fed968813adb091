#include "nercheck/utf8.hpp"

namespace nercheck::utf8 {

static std::size_t lead_len(unsigned char c) {
  if (c < 0x80) return 1;
  if ((c & 0xE0) == 0xC0) return 2;
  if ((c & 0xF0) == 0xE0) return 3;
  if ((c & 0xF8) == 0xF0) return 4;
  return 1;  // stray continuation byte, advance one
}

std::vector<std::size_t> byte_index(std::string_view text) {
  std::vector<std::size_t> idx;
  idx.reserve(text.size() + 1);
  std::size_t i = 0;
  while (i < text.size()) {
    idx.push_back(i);
    i += lead_len(static_cast<unsigned char>(text[i]));
    if (i > text.size()) i = text.size();
  }
  idx.push_back(text.size());
  return idx;
}

std::size_t length(std::string_view text) {
  std::size_t n = 0, i = 0;
  while (i < text.size()) {
    i += lead_len(static_cast<unsigned char>(text[i]));
    ++n;
  }
  return n;
}

std::size_t byte_offset(std::string_view text, std::size_t cp) {
  std::size_t n = 0, i = 0;
  while (i < text.size() && n < cp) {
    i += lead_len(static_cast<unsigned char>(text[i]));
    ++n;
  }
  return i;
}

std::string slice(std::string_view text, std::size_t cp_begin, std::size_t cp_end) {
  if (cp_end <= cp_begin) return {};
  std::size_t b = byte_offset(text, cp_begin);
  std::size_t e = byte_offset(text, cp_end);
  return std::string(text.substr(b, e - b));
}

}  // namespace nercheck::utf8
