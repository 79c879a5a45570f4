#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "medfaith/language.hpp"
#include "medfaith/lexicon.hpp"

namespace medfaith {

/// A tagged region of a text. Offsets are UTF-8 byte offsets, so
/// `text.substr(start, end - start) == term` always holds.
struct TermSpan {
  std::string term;       // surface string as it appears in the text
  std::string canonical;  // lexicon key (lower-cased for English)
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const TermSpan&, const TermSpan&) = default;
};

struct InversionPair {
  std::string positive;
  std::string negative;

  friend bool operator==(const InversionPair&, const InversionPair&) = default;
};

/// Negation words and the optional polarity pair used for logic inversion.
struct UnigramConfig {
  std::vector<std::string> negative_unigrams;
  std::optional<InversionPair> inversion_pair;

  /// Built-in lists: English {no, nope, doesn't, don't, not}; Chinese
  /// {不, 没有, 无, 没, 非} with the pair 可以 / 不可以.
  static UnigramConfig defaults(Language language);

  /// Throws ConfigError on an empty list, an empty entry, or a degenerate pair.
  void validate() const;

  friend bool operator==(const UnigramConfig&, const UnigramConfig&) = default;
};

/// Greedy longest-match, left to right, non-overlapping.
std::vector<TermSpan> tag_medical_terms(std::string_view text,
                                        const MedicalLexicon& lexicon);

/// Canonical terms tagged in `text` (deduplicated).
std::set<std::string> tagged_term_set(std::string_view text,
                                      const MedicalLexicon& lexicon);

/// Every lexicon term that occurs anywhere in `text`, including occurrences
/// nested inside or overlapping longer matches.
std::set<std::string> occurring_term_set(std::string_view text,
                                         const MedicalLexicon& lexicon);

std::vector<TermSpan> find_negative_unigrams(std::string_view text,
                                             const UnigramConfig& config,
                                             Language language);

/// Maximal integer or decimal digit runs. In English, runs glued to ASCII
/// letters (identifiers such as "T2" or "b12") are skipped.
std::vector<TermSpan> detect_numeric_attributes(
    std::string_view text, Language language = Language::english);

}  // namespace medfaith
