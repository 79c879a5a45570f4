#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "medfaith/corpus.hpp"
#include "medfaith/lexicon.hpp"
#include "medfaith/paraphraser.hpp"
#include "medfaith/rng.hpp"
#include "medfaith/summary_sets.hpp"
#include "medfaith/term_tagger.hpp"

namespace medfaith {

/// Positive augmentation rules in priority order.
enum class PositiveRule {
  shared_term_sentence = 1,  // sentence holding a term found in both texts
  longest_or_last = 2,       // longest sentence, or last utterance
  first_utterance = 3,       // dialogue only
  back_translate = 4,        // paraphrase of an earlier extract
};

enum class NegativeRule {
  failed_reference,
  replace_concept,
  append_concept,
  change_attribute,
  entity_swap,
  logic_inversion,
};

std::string_view to_string(PositiveRule rule) noexcept;
std::string_view to_string(NegativeRule rule) noexcept;
std::optional<PositiveRule> parse_positive_rule(std::string_view name) noexcept;
std::optional<NegativeRule> parse_negative_rule(std::string_view name) noexcept;

/// Provenance a negative rule stamps on its output.
Provenance provenance_of(NegativeRule rule) noexcept;

struct RuleProfile {
  std::string name = "custom";
  std::vector<PositiveRule> positive_rules;
  std::vector<NegativeRule> negative_rules;
  std::size_t min_positives = 2;
  std::uint64_t seed = 0;
  /// Run every extraction rule (1-3) instead of stopping once the positive
  /// set is large enough.
  bool run_all_extractions = false;
  /// Put every reference in the positive set without validation.
  bool all_references_positive = false;
  /// Maximum number of concept-replacement negatives per instance.
  std::size_t replace_multiplicity = 1;

  bool enables(NegativeRule rule) const noexcept;
  bool enables(PositiveRule rule) const noexcept;

  /// Throws ConfigError when the rule lists are malformed.
  void validate() const;

  /// Throws ConfigError when a rule needs data the language cannot supply
  /// (logic inversion without an inversion pair).
  void validate_for(Language language, const UnigramConfig& unigrams) const;

  /// hqs, rrs, mds, all_ref_positive.
  static std::optional<RuleProfile> builtin(std::string_view name);
};

using EntityTagger = std::function<std::vector<TermSpan>(std::string_view)>;

/// Everything the perturbation and extraction rules read.
struct BuildContext {
  const MedicalLexicon& lexicon;
  const UnigramConfig& unigrams;
  const Paraphraser& paraphraser;
  EntityTagger entity_tagger;  // defaults to the lexicon term tagger when empty
};

enum class Validation { positive, negative };

/// Positive iff every term tagged in the reference is also tagged in the
/// source. A reference without tagged terms passes.
Validation validate_reference(const TrainingInstance& instance,
                              const MedicalLexicon& lexicon);

/// Positive augmentation. `seed_positives` is the number of positives the
/// bundle already holds (1 when the reference was accepted) and `reference`
/// is the text back-translation falls back to when nothing was extracted.
/// Throws Error naming the instance when the source yields no sentence.
std::vector<LabeledSummary> extract_positive_sentences(
    const TrainingInstance& instance, const MedicalLexicon& lexicon,
    const RuleProfile& profile, const Paraphraser& paraphraser,
    std::size_t seed_positives, const std::string* reference = nullptr);

/// Replace one reference term that also occurs in the source with a lexicon
/// term found in neither text. Shared terms listed in `exclude_terms` are not
/// chosen again, which lets callers emit several distinct replacements.
std::optional<LabeledSummary> perturb_replace_concept(
    std::string_view reference, const MedicalLexicon& lexicon,
    std::string_view source, Rng& rng,
    const std::vector<std::string>& exclude_terms = {});

std::optional<LabeledSummary> perturb_append_concept(
    std::string_view reference, const MedicalLexicon& lexicon,
    std::string_view source, Rng& rng);

/// Replace one numeric attribute with a different value of the same form.
std::optional<LabeledSummary> perturb_attribute(
    std::string_view reference, Rng& rng,
    Language language = Language::english);

/// Permute entity strings by a random derangement of their positions.
std::optional<LabeledSummary> perturb_entity_swap(
    std::string_view reference, const EntityTagger& entity_tagger, Rng& rng);

/// Swap the first occurrence of either inversion unigram with its counterpart.
/// English pairs are matched case-insensitively on word boundaries.
std::optional<LabeledSummary> perturb_logic_inversion(
    std::string_view reference, const UnigramConfig& unigrams,
    Language language = Language::chinese);

/// Replacement pool: lexicon terms occurring in neither text, sorted.
std::vector<std::string> replacement_pool(std::string_view reference,
                                          std::string_view source,
                                          const MedicalLexicon& lexicon);

struct BundleReport {
  ContrastiveBundle bundle;
  Validation validation = Validation::positive;
  std::vector<NegativeRule> skipped;  // enabled rules that produced nothing
};

/// Positive and negative sets for one instance. Random choices are driven by
/// a seed derived from (profile.seed, instance.id, rule), so the result does
/// not depend on processing order. Throws Error naming the instance when the
/// bundle cannot satisfy its invariants (no negatives, too few positives).
BundleReport build_contrastive_bundle(const TrainingInstance& instance,
                                      const RuleProfile& profile,
                                      const BuildContext& context);

}  // namespace medfaith
