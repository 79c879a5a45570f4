#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace medfaith {

enum class Polarity { positive, negative };

enum class Provenance {
  reference_validated,
  reference_failed_validation,
  extracted_sentence,
  back_translation,
  first_utterance,
  concept_replaced,
  concept_appended,
  attribute_changed,
  entity_swapped,
  logic_inverted,
};

inline constexpr std::array kAllProvenances = {
    Provenance::reference_validated, Provenance::reference_failed_validation,
    Provenance::extracted_sentence,  Provenance::back_translation,
    Provenance::first_utterance,     Provenance::concept_replaced,
    Provenance::concept_appended,    Provenance::attribute_changed,
    Provenance::entity_swapped,      Provenance::logic_inverted,
};

/// The polarity a summary with this provenance must carry.
Polarity polarity_of(Provenance provenance) noexcept;

std::string_view to_string(Polarity polarity) noexcept;
std::string_view to_string(Provenance provenance) noexcept;
std::optional<Polarity> parse_polarity(std::string_view name) noexcept;
std::optional<Provenance> parse_provenance(std::string_view name) noexcept;

/// A byte-range substitution applied to the original reference. Appends are
/// empty ranges at the start or end.
struct TextEdit {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string original;
  std::string replacement;

  friend bool operator==(const TextEdit&, const TextEdit&) = default;
};

/// Applies non-overlapping edits (any order) to `text`.
std::string apply_edits(std::string_view text, std::vector<TextEdit> edits);

struct LabeledSummary {
  std::string text;
  Polarity polarity = Polarity::positive;
  Provenance provenance = Provenance::reference_validated;
  /// Edits against the reference that produced a perturbed negative.
  std::vector<TextEdit> edits;
  /// Paraphrase provider for back-translated positives.
  std::optional<std::string> via;

  friend bool operator==(const LabeledSummary&,
                         const LabeledSummary&) = default;
};

LabeledSummary make_summary(std::string text, Provenance provenance);

struct ContrastiveBundle {
  std::string instance_id;
  std::vector<LabeledSummary> positives;
  std::vector<LabeledSummary> negatives;

  friend bool operator==(const ContrastiveBundle&,
                         const ContrastiveBundle&) = default;
};

/// Human-readable invariant violations; empty when the bundle is well formed.
std::vector<std::string> check_bundle(const ContrastiveBundle& bundle,
                                      std::size_t min_positives = 2);

std::string serialize_bundle(const ContrastiveBundle& bundle);
ContrastiveBundle parse_bundle(std::string_view json_line);

}  // namespace medfaith
