#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "medfaith/language.hpp"

namespace medfaith {

enum class SpeakerRole { patient, doctor, other };

std::string_view to_string(SpeakerRole role) noexcept;
std::optional<SpeakerRole> parse_speaker_role(std::string_view name) noexcept;

struct Utterance {
  SpeakerRole role = SpeakerRole::other;
  std::string text;

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

using Dialogue = std::vector<Utterance>;

/// One source document (plain text or an ordered dialogue) with its reference
/// summary.
struct TrainingInstance {
  std::string id;
  std::variant<std::string, Dialogue> source;
  std::string reference;
  Language language = Language::english;

  bool is_dialogue() const noexcept {
    return std::holds_alternative<Dialogue>(source);
  }
  const Dialogue& dialogue() const { return std::get<Dialogue>(source); }

  /// Flattened source. Utterances are joined with newlines so that no
  /// lexicon match can straddle two turns.
  std::string source_text() const;

  /// Sentences of a text source, or the utterance texts of a dialogue.
  std::vector<std::string> source_sentences() const;

  friend bool operator==(const TrainingInstance&,
                         const TrainingInstance&) = default;
};

/// Parses one JSONL record. Throws InputError (single diagnostic, line 0) on
/// a malformed record or invariant violation.
TrainingInstance parse_instance(std::string_view json_line);

/// Canonical single-line JSON form: keys in the order id, source|utterances,
/// reference, language.
std::string serialize_instance(const TrainingInstance& instance);

/// Reads a JSONL corpus in file order. Every malformed line, empty reference
/// and duplicate id is collected and reported together in one InputError.
std::vector<TrainingInstance> load_corpus(const std::filesystem::path& path);

void write_corpus(const std::filesystem::path& path,
                  const std::vector<TrainingInstance>& instances);

}  // namespace medfaith
