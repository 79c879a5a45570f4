#include "medfaith/term_tagger.hpp"

#include "medfaith/error.hpp"
#include "medfaith/text.hpp"

namespace medfaith {

namespace {

bool starts_word(std::string_view s, std::size_t pos) {
  return pos == 0 ||
         !(text::is_word_byte(static_cast<unsigned char>(s[pos - 1])) &&
           text::is_word_byte(static_cast<unsigned char>(s[pos])));
}

/// Longest-match scan shared by the term and unigram taggers. `haystack` is
/// the (possibly case-folded) text the trie keys were built against; spans
/// report surfaces from the original `text`, which has identical byte offsets.
std::vector<TermSpan> scan_longest(std::string_view text,
                                   std::string_view haystack,
                                   const TrieMatcher& matcher,
                                   const std::vector<std::string>& keys,
                                   Language language) {
  std::vector<TermSpan> spans;
  const bool english = language == Language::english;
  const auto accept = [&](std::size_t end) {
    return !english || end == haystack.size() ||
           !(text::is_word_byte(static_cast<unsigned char>(haystack[end - 1])) &&
             text::is_word_byte(static_cast<unsigned char>(haystack[end])));
  };
  for (std::size_t i = 0; i < haystack.size();) {
    if (english && !starts_word(haystack, i)) {
      i += text::utf8_advance(haystack, i);
      continue;
    }
    const auto hit = matcher.longest_at(haystack, i, accept);
    if (hit.value == TrieMatcher::kNoValue) {
      i += text::utf8_advance(haystack, i);
      continue;
    }
    spans.push_back({std::string(text.substr(i, hit.end - i)),
                     keys[static_cast<std::size_t>(hit.value)], i, hit.end});
    i = hit.end;
  }
  return spans;
}

std::string fold(std::string_view text, Language language) {
  return language == Language::english ? text::ascii_lower(text)
                                       : std::string(text);
}

}  // namespace

UnigramConfig UnigramConfig::defaults(Language language) {
  if (language == Language::english) {
    return {{"no", "nope", "doesn't", "don't", "not"}, std::nullopt};
  }
  return {{"不", "没有", "无", "没", "非"}, InversionPair{"可以", "不可以"}};
}

void UnigramConfig::validate() const {
  if (negative_unigrams.empty()) {
    throw ConfigError("negative unigram list must not be empty");
  }
  for (const auto& u : negative_unigrams) {
    if (u.empty()) throw ConfigError("negative unigram must not be empty");
  }
  if (inversion_pair) {
    if (inversion_pair->positive.empty() || inversion_pair->negative.empty()) {
      throw ConfigError("inversion pair entries must not be empty");
    }
    if (inversion_pair->positive == inversion_pair->negative) {
      throw ConfigError("inversion pair entries must differ");
    }
  }
}

std::vector<TermSpan> tag_medical_terms(std::string_view text,
                                        const MedicalLexicon& lexicon) {
  const auto haystack = fold(text, lexicon.language());
  return scan_longest(text, haystack, lexicon.matcher(), lexicon.terms(),
                      lexicon.language());
}

std::set<std::string> tagged_term_set(std::string_view text,
                                      const MedicalLexicon& lexicon) {
  std::set<std::string> out;
  for (auto& span : tag_medical_terms(text, lexicon)) {
    out.insert(std::move(span.canonical));
  }
  return out;
}

std::set<std::string> occurring_term_set(std::string_view text,
                                         const MedicalLexicon& lexicon) {
  std::set<std::string> out;
  const bool english = lexicon.language() == Language::english;
  const auto haystack = fold(text, lexicon.language());
  for (std::size_t i = 0; i < haystack.size(); i += text::utf8_advance(haystack, i)) {
    if (english && !starts_word(haystack, i)) continue;
    lexicon.matcher().all_at(haystack, i, [&](const TrieMatcher::Hit& hit) {
      if (!english || text::on_word_boundaries(haystack, i, hit.end)) {
        out.insert(lexicon.terms()[static_cast<std::size_t>(hit.value)]);
      }
    });
  }
  return out;
}

std::vector<TermSpan> find_negative_unigrams(std::string_view text,
                                             const UnigramConfig& config,
                                             Language language) {
  TrieMatcher matcher;
  std::vector<std::string> keys;
  for (const auto& u : config.negative_unigrams) {
    auto key = fold(u, language);
    if (matcher.insert(key, static_cast<std::int32_t>(keys.size()))) {
      keys.push_back(std::move(key));
    }
  }
  const auto haystack = fold(text, language);
  return scan_longest(text, haystack, matcher, keys, language);
}

std::vector<TermSpan> detect_numeric_attributes(std::string_view text,
                                                Language language) {
  std::vector<TermSpan> spans;
  const auto at = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
  for (std::size_t i = 0; i < text.size();) {
    if (!text::is_digit(at(i))) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < text.size() && text::is_digit(at(end))) ++end;
    if (end + 1 < text.size() && text[end] == '.' && text::is_digit(at(end + 1))) {
      ++end;
      while (end < text.size() && text::is_digit(at(end))) ++end;
    }
    const bool glued = (i > 0 && text::is_ascii_alpha(at(i - 1))) ||
                       (end < text.size() && text::is_ascii_alpha(at(end)));
    if (!(language == Language::english && glued)) {
      const std::string surface(text.substr(i, end - i));
      spans.push_back({surface, surface, i, end});
    }
    i = end;
  }
  return spans;
}

}  // namespace medfaith
