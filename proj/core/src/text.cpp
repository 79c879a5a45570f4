#include "medfaith/text.hpp"

#include <array>

namespace medfaith {

std::string_view to_string(Language language) noexcept {
  switch (language) {
    case Language::english: return "english";
    case Language::chinese: return "chinese";
  }
  return "english";
}

std::optional<Language> parse_language(std::string_view name) noexcept {
  if (name == "english" || name == "en") return Language::english;
  if (name == "chinese" || name == "zh") return Language::chinese;
  return std::nullopt;
}

namespace text {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::size_t utf8_advance(std::string_view s, std::size_t pos) noexcept {
  const auto lead = static_cast<unsigned char>(s[pos]);
  std::size_t len = 1;
  if (lead >= 0xF0) len = 4;
  else if (lead >= 0xE0) len = 3;
  else if (lead >= 0xC0) len = 2;
  // never step over a following lead byte or past the end
  std::size_t n = 1;
  while (n < len && pos + n < s.size() &&
         (static_cast<unsigned char>(s[pos + n]) & 0xC0) == 0x80) {
    ++n;
  }
  return n;
}

std::size_t utf8_length(std::string_view s) noexcept {
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.size(); i += utf8_advance(s, i)) ++count;
  return count;
}

std::string_view trim(std::string_view s) noexcept {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool on_word_boundaries(std::string_view s, std::size_t start,
                        std::size_t end) noexcept {
  if (start > 0 && is_word_byte(static_cast<unsigned char>(s[start - 1])) &&
      is_word_byte(static_cast<unsigned char>(s[start]))) {
    return false;
  }
  if (end < s.size() && end > start &&
      is_word_byte(static_cast<unsigned char>(s[end - 1])) &&
      is_word_byte(static_cast<unsigned char>(s[end]))) {
    return false;
  }
  return true;
}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

void push_piece(std::vector<std::string>& out, std::string_view piece) {
  piece = trim(piece);
  if (!piece.empty()) out.emplace_back(piece);
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view s, Language language) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  if (language == Language::english) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const char c = s[i];
      if ((c == '.' || c == '?' || c == '!') &&
          (i + 1 == s.size() || is_space(s[i + 1]))) {
        push_piece(out, s.substr(begin, i + 1 - begin));
        begin = i + 1;
      }
    }
  } else {
    static constexpr std::array<std::string_view, 3> kStops = {"。", "？", "！"};
    for (std::size_t i = 0; i < s.size();) {
      bool stopped = false;
      for (auto stop : kStops) {
        if (s.substr(i, stop.size()) == stop) {
          push_piece(out, s.substr(begin, i + stop.size() - begin));
          i += stop.size();
          begin = i;
          stopped = true;
          break;
        }
      }
      if (!stopped) i += utf8_advance(s, i);
    }
  }
  push_piece(out, s.substr(begin));
  return out;
}

}  // namespace text
}  // namespace medfaith
