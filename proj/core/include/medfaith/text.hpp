#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "medfaith/language.hpp"

namespace medfaith::text {

/// Bytes that belong to a word for English boundary checks: ASCII letters and
/// digits, plus any byte of a multi-byte UTF-8 sequence.
inline bool is_word_byte(unsigned char c) noexcept {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c >= 0x80;
}

inline bool is_ascii_alpha(unsigned char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline bool is_digit(unsigned char c) noexcept { return c >= '0' && c <= '9'; }

std::string ascii_lower(std::string_view s);

/// Byte length of the UTF-8 sequence starting at `pos` (1 for invalid lead bytes).
std::size_t utf8_advance(std::string_view s, std::size_t pos) noexcept;

std::size_t utf8_length(std::string_view s) noexcept;

std::string_view trim(std::string_view s) noexcept;

/// True when [start, end) does not cut through a word on either side.
bool on_word_boundaries(std::string_view s, std::size_t start,
                        std::size_t end) noexcept;

/// Sentence segmentation. English breaks after . ? ! followed by whitespace,
/// Chinese after 。 ？ ！. Pieces are trimmed and empty pieces dropped.
std::vector<std::string> split_sentences(std::string_view s, Language language);

}  // namespace medfaith::text
