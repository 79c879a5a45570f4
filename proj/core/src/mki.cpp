#include "medfaith/mki.hpp"

#include <set>

#include "json_util.hpp"
#include "medfaith/error.hpp"
#include "medfaith/text.hpp"

namespace medfaith {

using detail::json;
using detail::ordered_json;

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty()) throw ConfigError("vocabulary must not be empty");
  auto matcher = std::make_shared<TrieMatcher>();
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) {
      throw ConfigError("vocabulary token " + std::to_string(i) + " is empty");
    }
    if (!matcher->insert(tokens_[i], static_cast<std::int32_t>(i))) {
      throw ConfigError("duplicate vocabulary token at index " + std::to_string(i) +
                        ": \"" + tokens_[i] + "\"");
    }
  }
  matcher_ = std::move(matcher);
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view token) const {
  const auto hit = matcher_->longest_at(
      token, 0, [&](std::size_t end) { return end == token.size(); });
  if (hit.value == TrieMatcher::kNoValue) return std::nullopt;
  return static_cast<std::size_t>(hit.value);
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  std::vector<std::string> tokens;
  for (auto& line : detail::read_lines(path, /*keep_blank=*/true)) {
    tokens.push_back(std::move(line.text));
  }
  // a trailing newline does not introduce an empty token
  while (!tokens.empty() && tokens.back().empty()) tokens.pop_back();
  try {
    return Vocabulary(std::move(tokens));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::vector<VocabToken> tokenize_with_offsets(std::string_view text,
                                              const Vocabulary& vocab) {
  std::vector<VocabToken> out;
  for (std::size_t i = 0; i < text.size();) {
    const auto hit = vocab.matcher().longest_at(text, i);
    if (hit.value != TrieMatcher::kNoValue) {
      out.push_back({static_cast<std::size_t>(hit.value), i, hit.end});
      i = hit.end;
    } else {
      const auto step = text::utf8_advance(text, i);
      out.push_back({Vocabulary::kUnknown, i, i + step});
      i += step;
    }
  }
  return out;
}

std::vector<std::size_t> tokenize_with_vocab(std::string_view text,
                                             const Vocabulary& vocab) {
  std::vector<std::size_t> out;
  for (const auto& t : tokenize_with_offsets(text, vocab)) out.push_back(t.index);
  return out;
}

std::int64_t MkiVector::total() const noexcept {
  std::int64_t sum = 0;
  for (auto c : counts) sum += c;
  return sum;
}

std::vector<std::pair<std::size_t, std::int64_t>> MkiVector::sparse() const {
  std::vector<std::pair<std::size_t, std::int64_t>> out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] != 0) out.emplace_back(i, counts[i]);
  }
  return out;
}

MkiVector build_bm_vector(std::string_view reference, const MedicalLexicon& lexicon,
                          const UnigramConfig& unigrams, const Vocabulary& vocab,
                          std::string instance_id) {
  MkiVector bm;
  bm.instance_id = std::move(instance_id);
  bm.counts.assign(vocab.size(), 0);

  const auto tokens = tokenize_with_offsets(reference, vocab);
  // First token that overlaps a byte range starting at `start`.
  auto first_overlapping = [&](std::size_t start) {
    std::size_t lo = 0, hi = tokens.size();
    while (lo < hi) {
      const auto mid = (lo + hi) / 2;
      if (tokens[mid].end <= start) lo = mid + 1;
      else hi = mid;
    }
    return lo;
  };
  auto count_span = [&](const TermSpan& span) {
    const auto first = first_overlapping(span.start);
    for (auto t = first; t < tokens.size() && tokens[t].start < span.end; ++t) {
      ++bm.counts[tokens[t].index];
    }
    return first;
  };

  for (const auto& span : tag_medical_terms(reference, lexicon)) {
    const auto first = count_span(span);
    for (std::size_t back = 1; back <= 2 && back <= first; ++back) {
      ++bm.counts[tokens[first - back].index];
    }
  }
  for (const auto& span : find_negative_unigrams(reference, unigrams, lexicon.language())) {
    count_span(span);
  }
  return bm;
}

std::string serialize_mki(const MkiVector& vector) {
  ordered_json j;
  j["instance_id"] = vector.instance_id;
  ordered_json entries = ordered_json::array();
  for (const auto& [index, count] : vector.sparse()) {
    entries.push_back(ordered_json::array({index, count}));
  }
  j["entries"] = std::move(entries);
  j["vocab_size"] = vector.counts.size();
  return detail::dump(j);
}

MkiVector parse_mki(std::string_view json_line) {
  try {
    const auto j = json::parse(json_line);
    MkiVector v;
    v.instance_id = detail::require_string(j, "instance_id");
    const auto size = detail::require(j, "vocab_size").get<std::size_t>();
    v.counts.assign(size, 0);
    for (const auto& entry : detail::require(j, "entries")) {
      const auto index = entry.at(0).get<std::size_t>();
      const auto count = entry.at(1).get<std::int64_t>();
      if (index >= size) throw Error("entry index out of range");
      if (count < 0) throw Error("negative count");
      v.counts[index] += count;
    }
    return v;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed MKI vector: ") + e.what());
  }
}

}  // namespace medfaith
