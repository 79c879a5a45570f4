#include "medfaith/lexicon.hpp"

#include "json_util.hpp"
#include "medfaith/error.hpp"
#include "medfaith/text.hpp"

namespace medfaith {

MedicalLexicon::MedicalLexicon(Language language,
                               const std::vector<LexiconEntry>& entries)
    : language_(language) {
  std::map<std::string, std::optional<std::string>, std::less<>> merged;
  for (const auto& entry : entries) {
    if (entry.term.empty()) throw ConfigError("lexicon term must not be empty");
    auto key = canonicalize(entry.term);
    auto [it, inserted] = merged.try_emplace(std::move(key), entry.concept_id);
    if (!inserted && !it->second && entry.concept_id) it->second = entry.concept_id;
  }
  auto matcher = std::make_shared<TrieMatcher>();
  terms_.reserve(merged.size());
  concepts_.reserve(merged.size());
  for (auto& [term, concept_id] : merged) {
    const auto value = static_cast<std::int32_t>(terms_.size());
    matcher->insert(term, value);
    index_.emplace(term, terms_.size());
    terms_.push_back(term);
    concepts_.push_back(concept_id);
  }
  matcher_ = std::move(matcher);
}

std::string MedicalLexicon::canonicalize(std::string_view surface) const {
  if (language_ == Language::english) return text::ascii_lower(surface);
  return std::string(surface);
}

bool MedicalLexicon::contains(std::string_view surface) const {
  return index_.find(canonicalize(surface)) != index_.end();
}

std::optional<std::string> MedicalLexicon::concept_id(
    std::string_view surface) const {
  const auto it = index_.find(canonicalize(surface));
  if (it == index_.end()) return std::nullopt;
  return concepts_[it->second];
}

std::string MedicalLexicon::serialize() const {
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    out += terms_[i];
    if (concepts_[i]) {
      out += '\t';
      out += *concepts_[i];
    }
    out += '\n';
  }
  return out;
}

MedicalLexicon load_lexicon(const std::filesystem::path& path,
                            Language language) {
  std::vector<LexiconEntry> entries;
  for (const auto& line : detail::read_lines(path)) {
    std::string_view view = line.text;
    LexiconEntry entry;
    const auto tab = view.find('\t');
    entry.term = std::string(text::trim(view.substr(0, tab)));
    if (tab != std::string_view::npos) {
      auto id = text::trim(view.substr(tab + 1));
      if (!id.empty()) entry.concept_id = std::string(id);
    }
    if (entry.term.empty()) continue;
    entries.push_back(std::move(entry));
  }
  if (entries.empty()) {
    throw ConfigError("lexicon " + path.string() + " contains no terms");
  }
  return MedicalLexicon(language, entries);
}

}  // namespace medfaith
