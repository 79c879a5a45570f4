#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "medfaith/language.hpp"
#include "medfaith/trie_matcher.hpp"

namespace medfaith {

struct LexiconEntry {
  std::string term;
  std::optional<std::string> concept_id;
};

/// Recognized medical terms. English terms are stored lower-cased and matched
/// case-insensitively on word boundaries; Chinese terms are matched as exact
/// substrings. Immutable once built.
class MedicalLexicon {
 public:
  MedicalLexicon(Language language, const std::vector<LexiconEntry>& entries);

  Language language() const noexcept { return language_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  /// Canonical matching key of a surface string.
  std::string canonicalize(std::string_view surface) const;

  bool contains(std::string_view surface) const;
  std::optional<std::string> concept_id(std::string_view surface) const;

  /// Canonical terms in sorted order; index i is the matcher value for term i.
  const std::vector<std::string>& terms() const noexcept { return terms_; }

  const TrieMatcher& matcher() const noexcept { return *matcher_; }

  /// Canonical file form: sorted, one `term[\tconcept]` per line.
  std::string serialize() const;

 private:
  Language language_;
  std::vector<std::string> terms_;
  std::vector<std::optional<std::string>> concepts_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::shared_ptr<const TrieMatcher> matcher_;
};

/// One term per line with an optional TAB + concept id. Blank lines are
/// skipped; a file without any term is an error.
MedicalLexicon load_lexicon(const std::filesystem::path& path,
                            Language language);

}  // namespace medfaith
