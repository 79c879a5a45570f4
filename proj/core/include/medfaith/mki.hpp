#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "medfaith/lexicon.hpp"
#include "medfaith/term_tagger.hpp"
#include "medfaith/trie_matcher.hpp"

namespace medfaith {

/// Model vocabulary. Index 0 is reserved for unknown input.
class Vocabulary {
 public:
  static constexpr std::size_t kUnknown = 0;

  /// Throws ConfigError on an empty list, an empty token or a duplicate.
  explicit Vocabulary(std::vector<std::string> tokens);

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::string& token(std::size_t index) const { return tokens_.at(index); }
  std::optional<std::size_t> index_of(std::string_view token) const;
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const TrieMatcher& matcher() const noexcept { return *matcher_; }

 private:
  std::vector<std::string> tokens_;
  std::shared_ptr<const TrieMatcher> matcher_;
};

/// One token per line (trailing CR/LF stripped, other whitespace kept);
/// line number (0-based) is the index.
Vocabulary load_vocabulary(const std::filesystem::path& path);

struct VocabToken {
  std::size_t index = 0;
  std::size_t start = 0;  // byte range in the tokenized text
  std::size_t end = 0;

  friend bool operator==(const VocabToken&, const VocabToken&) = default;
};

/// Greedy longest-match segmentation. A character no token covers becomes one
/// unknown token.
std::vector<VocabToken> tokenize_with_offsets(std::string_view text,
                                              const Vocabulary& vocab);
std::vector<std::size_t> tokenize_with_vocab(std::string_view text,
                                             const Vocabulary& vocab);

/// Frequency vector over the vocabulary of medical-term tokens, the two
/// tokens preceding each term, and negative-unigram tokens.
struct MkiVector {
  std::string instance_id;
  std::vector<std::int64_t> counts;

  std::int64_t total() const noexcept;
  /// Nonzero entries in index order.
  std::vector<std::pair<std::size_t, std::int64_t>> sparse() const;

  friend bool operator==(const MkiVector&, const MkiVector&) = default;
};

/// Counts accrue once per role occurrence: a token that lies inside one term
/// and before another is counted for both.
MkiVector build_bm_vector(std::string_view reference,
                          const MedicalLexicon& lexicon,
                          const UnigramConfig& unigrams,
                          const Vocabulary& vocab,
                          std::string instance_id = {});

/// {"instance_id":..., "entries":[[i,c],...], "vocab_size":V}
std::string serialize_mki(const MkiVector& vector);
MkiVector parse_mki(std::string_view json_line);

}  // namespace medfaith
