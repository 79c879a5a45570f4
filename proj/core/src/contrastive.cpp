#include "medfaith/contrastive.hpp"

#include <algorithm>
#include <set>

#include "medfaith/error.hpp"
#include "medfaith/text.hpp"

namespace medfaith {

std::string_view to_string(PositiveRule rule) noexcept {
  switch (rule) {
    case PositiveRule::shared_term_sentence: return "shared_term_sentence";
    case PositiveRule::longest_or_last: return "longest_or_last";
    case PositiveRule::first_utterance: return "first_utterance";
    case PositiveRule::back_translate: return "back_translate";
  }
  return "";
}

std::string_view to_string(NegativeRule rule) noexcept {
  switch (rule) {
    case NegativeRule::failed_reference: return "failed_reference";
    case NegativeRule::replace_concept: return "replace_concept";
    case NegativeRule::append_concept: return "append_concept";
    case NegativeRule::change_attribute: return "change_attribute";
    case NegativeRule::entity_swap: return "entity_swap";
    case NegativeRule::logic_inversion: return "logic_inversion";
  }
  return "";
}

std::optional<PositiveRule> parse_positive_rule(std::string_view name) noexcept {
  for (auto r : {PositiveRule::shared_term_sentence, PositiveRule::longest_or_last,
                 PositiveRule::first_utterance, PositiveRule::back_translate}) {
    if (to_string(r) == name) return r;
  }
  if (name.size() == 1 && name[0] >= '1' && name[0] <= '4') {
    return static_cast<PositiveRule>(name[0] - '0');
  }
  return std::nullopt;
}

std::optional<NegativeRule> parse_negative_rule(std::string_view name) noexcept {
  for (auto r : {NegativeRule::failed_reference, NegativeRule::replace_concept,
                 NegativeRule::append_concept, NegativeRule::change_attribute,
                 NegativeRule::entity_swap, NegativeRule::logic_inversion}) {
    if (to_string(r) == name) return r;
  }
  return std::nullopt;
}

Provenance provenance_of(NegativeRule rule) noexcept {
  switch (rule) {
    case NegativeRule::failed_reference: return Provenance::reference_failed_validation;
    case NegativeRule::replace_concept: return Provenance::concept_replaced;
    case NegativeRule::append_concept: return Provenance::concept_appended;
    case NegativeRule::change_attribute: return Provenance::attribute_changed;
    case NegativeRule::entity_swap: return Provenance::entity_swapped;
    case NegativeRule::logic_inversion: return Provenance::logic_inverted;
  }
  return Provenance::reference_failed_validation;
}

// ---------------------------------------------------------------------------
// Profiles

bool RuleProfile::enables(NegativeRule rule) const noexcept {
  return std::find(negative_rules.begin(), negative_rules.end(), rule) !=
         negative_rules.end();
}

bool RuleProfile::enables(PositiveRule rule) const noexcept {
  return std::find(positive_rules.begin(), positive_rules.end(), rule) !=
         positive_rules.end();
}

void RuleProfile::validate() const {
  if (positive_rules.empty()) {
    throw ConfigError("profile " + name + ": positive_rules must not be empty");
  }
  for (std::size_t i = 1; i < positive_rules.size(); ++i) {
    if (positive_rules[i - 1] >= positive_rules[i]) {
      throw ConfigError("profile " + name +
                        ": positive_rules must be distinct and in priority order");
    }
  }
  std::set<NegativeRule> seen;
  for (auto r : negative_rules) {
    if (!seen.insert(r).second) {
      throw ConfigError("profile " + name + ": duplicate negative rule " +
                        std::string(to_string(r)));
    }
  }
  if (min_positives == 0) {
    throw ConfigError("profile " + name + ": min_positives must be at least 1");
  }
  if (replace_multiplicity == 0) {
    throw ConfigError("profile " + name + ": replace_multiplicity must be at least 1");
  }
}

void RuleProfile::validate_for(Language language,
                               const UnigramConfig& unigrams) const {
  validate();
  unigrams.validate();
  if (enables(NegativeRule::logic_inversion) && !unigrams.inversion_pair) {
    throw ConfigError("profile " + name + " enables logic inversion but no " +
                      "inversion pair is configured for " +
                      std::string(to_string(language)));
  }
}

std::optional<RuleProfile> RuleProfile::builtin(std::string_view name) {
  using P = PositiveRule;
  using N = NegativeRule;
  RuleProfile p;
  p.name = std::string(name);
  if (name == "hqs") {
    p.positive_rules = {P::shared_term_sentence, P::longest_or_last, P::back_translate};
    p.negative_rules = {N::failed_reference, N::replace_concept, N::append_concept,
                        N::change_attribute, N::entity_swap};
  } else if (name == "rrs") {
    p.positive_rules = {P::shared_term_sentence, P::longest_or_last, P::back_translate};
    p.negative_rules = {N::failed_reference, N::replace_concept, N::append_concept};
  } else if (name == "mds") {
    p.positive_rules = {P::shared_term_sentence, P::longest_or_last, P::first_utterance};
    p.negative_rules = {N::failed_reference, N::replace_concept, N::append_concept,
                        N::change_attribute, N::logic_inversion};
    p.run_all_extractions = true;
  } else if (name == "all_ref_positive") {
    p.positive_rules = {P::back_translate};
    p.negative_rules = {N::replace_concept, N::append_concept, N::change_attribute,
                        N::entity_swap};
    p.all_references_positive = true;
  } else {
    return std::nullopt;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Validation and positive extraction

Validation validate_reference(const TrainingInstance& instance,
                              const MedicalLexicon& lexicon) {
  const auto ref_terms = tagged_term_set(instance.reference, lexicon);
  if (ref_terms.empty()) return Validation::positive;
  const auto source_terms = tagged_term_set(instance.source_text(), lexicon);
  return std::includes(source_terms.begin(), source_terms.end(),
                       ref_terms.begin(), ref_terms.end())
             ? Validation::positive
             : Validation::negative;
}

std::vector<LabeledSummary> extract_positive_sentences(
    const TrainingInstance& instance, const MedicalLexicon& lexicon,
    const RuleProfile& profile, const Paraphraser& paraphraser,
    std::size_t seed_positives, const std::string* reference) {
  const auto sentences = instance.source_sentences();
  if (sentences.empty()) {
    throw Error("instance " + instance.id + ": source has no extractable sentence");
  }

  std::vector<LabeledSummary> out;
  std::set<std::string, std::less<>> present;
  if (seed_positives > 0 && reference != nullptr) present.insert(*reference);

  std::optional<std::size_t> last_extract;
  auto add_extract = [&](const std::string& sentence, Provenance provenance) {
    if (!present.insert(sentence).second) return false;
    last_extract = out.size();
    out.push_back(make_summary(sentence, provenance));
    return true;
  };
  auto enough = [&] {
    return !profile.run_all_extractions &&
           seed_positives + out.size() >= profile.min_positives;
  };

  std::set<std::string> shared;
  if (profile.enables(PositiveRule::shared_term_sentence)) {
    const auto ref_terms = tagged_term_set(instance.reference, lexicon);
    const auto source_terms = tagged_term_set(instance.source_text(), lexicon);
    std::set_intersection(ref_terms.begin(), ref_terms.end(), source_terms.begin(),
                          source_terms.end(), std::inserter(shared, shared.end()));
  }

  bool primary_found = false;  // rules (1) and (2) are alternatives
  for (const auto rule : profile.positive_rules) {
    if (enough()) break;
    switch (rule) {
      case PositiveRule::shared_term_sentence:
        for (const auto& s : sentences) {
          const auto terms = tagged_term_set(s, lexicon);
          const bool hit = std::any_of(terms.begin(), terms.end(), [&](const auto& t) {
            return shared.count(t) > 0;
          });
          if (hit && add_extract(s, Provenance::extracted_sentence)) {
            primary_found = true;
            break;
          }
        }
        break;
      case PositiveRule::longest_or_last:
        if (primary_found && !profile.run_all_extractions) break;
        if (instance.is_dialogue()) {
          primary_found = add_extract(sentences.back(), Provenance::extracted_sentence);
        } else {
          std::vector<std::size_t> order(sentences.size());
          for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
          std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
            return text::utf8_length(sentences[a]) > text::utf8_length(sentences[b]);
          });
          for (auto i : order) {
            if (add_extract(sentences[i], Provenance::extracted_sentence)) {
              primary_found = true;
              break;
            }
          }
        }
        break;
      case PositiveRule::first_utterance:
        if (instance.is_dialogue()) {
          add_extract(sentences.front(), Provenance::first_utterance);
        }
        break;
      case PositiveRule::back_translate: {
        std::string target;
        if (last_extract) target = out[*last_extract].text;
        else if (seed_positives > 0 && reference != nullptr) target = *reference;
        else break;
        auto paraphrase = paraphraser.paraphrase(target, instance.language);
        if (paraphrase.empty()) break;
        auto summary = make_summary(std::move(paraphrase), Provenance::back_translation);
        summary.via = paraphraser.name();
        out.push_back(std::move(summary));
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Negative perturbations

namespace {

/// Lexicon terms absent from both texts, addressed by rank without
/// materializing the (possibly very large) complement.
class FreshTermPool {
 public:
  FreshTermPool(std::string_view reference, std::string_view source,
                const MedicalLexicon& lexicon)
      : terms_(lexicon.terms()) {
    auto excluded = occurring_term_set(reference, lexicon);
    excluded.merge(occurring_term_set(source, lexicon));
    for (const auto& t : excluded) {
      const auto it = std::lower_bound(terms_.begin(), terms_.end(), t);
      excluded_.push_back(static_cast<std::size_t>(it - terms_.begin()));
    }
    std::sort(excluded_.begin(), excluded_.end());
  }

  std::size_t size() const noexcept { return terms_.size() - excluded_.size(); }

  const std::string& at(std::size_t rank) const {
    std::size_t index = rank;
    for (auto e : excluded_) {
      if (e <= index) ++index;
      else break;
    }
    return terms_[index];
  }

  const std::string& pick(Rng& rng) const { return at(rng.below(size())); }

 private:
  const std::vector<std::string>& terms_;
  std::vector<std::size_t> excluded_;
};

LabeledSummary from_edits(std::string_view reference, std::vector<TextEdit> edits,
                          Provenance provenance) {
  auto summary = make_summary(apply_edits(reference, edits), provenance);
  summary.edits = std::move(edits);
  return summary;
}

std::string format_number(std::uint64_t units, std::size_t decimals,
                          std::size_t int_width) {
  std::uint64_t scale = 1;
  for (std::size_t i = 0; i < decimals; ++i) scale *= 10;
  std::string int_part = std::to_string(units / scale);
  if (int_part.size() < int_width) {
    int_part.insert(0, int_width - int_part.size(), '0');
  }
  if (decimals == 0) return int_part;
  std::string frac = std::to_string(units % scale);
  frac.insert(0, decimals - frac.size(), '0');
  return int_part + "." + frac;
}

std::string perturb_number(std::string_view number, Rng& rng) {
  const auto dot = number.find('.');
  const auto int_part = number.substr(0, dot);
  const auto frac_part =
      dot == std::string_view::npos ? std::string_view{} : number.substr(dot + 1);
  const std::size_t decimals = frac_part.size();

  if (int_part.size() + decimals > 17) {
    // Too wide for exact integer arithmetic: change the final digit.
    std::string out(number);
    auto& last = out.back();
    last = static_cast<char>('0' + ((last - '0') + 1 + rng.below(9)) % 10);
    return out;
  }

  std::uint64_t scale = 1;
  for (std::size_t i = 0; i < decimals; ++i) scale *= 10;
  const std::uint64_t value = std::stoull(std::string(int_part) + std::string(frac_part));
  const std::uint64_t radius = 9 * scale;
  const std::uint64_t lo = value >= radius ? value - radius : 0;
  const std::uint64_t hi = value + radius;
  std::uint64_t drawn = lo + rng.below(hi - lo);  // hi - lo choices once v is removed
  if (drawn >= value) ++drawn;

  const std::size_t width =
      (int_part.size() > 1 && int_part.front() == '0') ? int_part.size() : 0;
  return format_number(drawn, decimals, width);
}

std::vector<std::size_t> random_derangement(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(perm[i], perm[rng.below(i + 1)]);
    }
    bool fixed = false;
    for (std::size_t i = 0; i < n; ++i) fixed = fixed || perm[i] == i;
    if (!fixed) return perm;
  }
}

}  // namespace

std::vector<std::string> replacement_pool(std::string_view reference,
                                          std::string_view source,
                                          const MedicalLexicon& lexicon) {
  FreshTermPool pool(reference, source, lexicon);
  std::vector<std::string> out;
  out.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) out.push_back(pool.at(i));
  return out;
}

std::optional<LabeledSummary> perturb_replace_concept(
    std::string_view reference, const MedicalLexicon& lexicon,
    std::string_view source, Rng& rng,
    const std::vector<std::string>& exclude_terms) {
  const auto source_terms = tagged_term_set(source, lexicon);
  std::vector<TermSpan> candidates;
  for (auto& span : tag_medical_terms(reference, lexicon)) {
    if (source_terms.count(span.canonical) &&
        std::find(exclude_terms.begin(), exclude_terms.end(), span.canonical) ==
            exclude_terms.end()) {
      candidates.push_back(std::move(span));
    }
  }
  if (candidates.empty()) return std::nullopt;
  const FreshTermPool pool(reference, source, lexicon);
  if (pool.size() == 0) return std::nullopt;

  const auto& target = candidates[rng.below(candidates.size())];
  const auto& fresh = pool.pick(rng);
  return from_edits(reference, {{target.start, target.end, target.term, fresh}},
                    Provenance::concept_replaced);
}

std::optional<LabeledSummary> perturb_append_concept(
    std::string_view reference, const MedicalLexicon& lexicon,
    std::string_view source, Rng& rng) {
  const FreshTermPool pool(reference, source, lexicon);
  if (pool.size() == 0) return std::nullopt;
  const bool at_start = rng.coin();
  const auto& fresh = pool.pick(rng);
  const std::string gap = lexicon.language() == Language::english ? " " : "";
  TextEdit edit;
  if (at_start) {
    edit = {0, 0, "", fresh + gap};
  } else {
    edit = {reference.size(), reference.size(), "", gap + fresh};
  }
  return from_edits(reference, {std::move(edit)}, Provenance::concept_appended);
}

std::optional<LabeledSummary> perturb_attribute(std::string_view reference,
                                                Rng& rng, Language language) {
  const auto spans = detect_numeric_attributes(reference, language);
  if (spans.empty()) return std::nullopt;
  const auto& target = spans[rng.below(spans.size())];
  return from_edits(reference,
                    {{target.start, target.end, target.term,
                      perturb_number(target.term, rng)}},
                    Provenance::attribute_changed);
}

std::optional<LabeledSummary> perturb_entity_swap(std::string_view reference,
                                                  const EntityTagger& entity_tagger,
                                                  Rng& rng) {
  auto spans = entity_tagger(reference);
  if (spans.size() < 2) return std::nullopt;
  std::sort(spans.begin(), spans.end(),
            [](const auto& a, const auto& b) { return a.start < b.start; });
  const bool all_same = std::all_of(spans.begin(), spans.end(), [&](const auto& s) {
    return s.term == spans.front().term;
  });
  if (all_same) return std::nullopt;

  // Some derangements leave the text unchanged (e.g. A B A B); redraw those.
  constexpr int kAttempts = 64;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const auto perm = random_derangement(spans.size(), rng);
    std::vector<TextEdit> edits;
    bool changed = false;
    for (std::size_t i = 0; i < spans.size(); ++i) {
      const auto& moved = spans[perm[i]].term;
      changed = changed || moved != spans[i].term;
      edits.push_back({spans[i].start, spans[i].end, spans[i].term, moved});
    }
    if (changed) return from_edits(reference, std::move(edits), Provenance::entity_swapped);
  }
  return std::nullopt;
}

std::optional<LabeledSummary> perturb_logic_inversion(std::string_view reference,
                                                      const UnigramConfig& unigrams,
                                                      Language language) {
  if (!unigrams.inversion_pair) return std::nullopt;
  const auto& pair = *unigrams.inversion_pair;
  const bool english = language == Language::english;
  const auto haystack = english ? text::ascii_lower(reference) : std::string(reference);
  const auto positive = english ? text::ascii_lower(pair.positive) : pair.positive;
  const auto negative = english ? text::ascii_lower(pair.negative) : pair.negative;

  auto matches = [&](std::size_t pos, const std::string& word) {
    if (haystack.compare(pos, word.size(), word) != 0) return false;
    return !english || text::on_word_boundaries(haystack, pos, pos + word.size());
  };
  // The longer word is tried first so that one containing the other wins.
  const bool negative_first = negative.size() >= positive.size();
  for (std::size_t i = 0; i < haystack.size(); i += text::utf8_advance(haystack, i)) {
    for (int k = 0; k < 2; ++k) {
      const bool try_negative = (k == 0) == negative_first;
      const auto& word = try_negative ? negative : positive;
      if (matches(i, word)) {
        const auto& swap_in = try_negative ? pair.positive : pair.negative;
        return from_edits(reference,
                          {{i, i + word.size(),
                            std::string(reference.substr(i, word.size())), swap_in}},
                          Provenance::logic_inverted);
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Bundle assembly

BundleReport build_contrastive_bundle(const TrainingInstance& instance,
                                      const RuleProfile& profile,
                                      const BuildContext& context) {
  const auto& lexicon = context.lexicon;
  BundleReport report;
  auto& bundle = report.bundle;
  bundle.instance_id = instance.id;

  report.validation = profile.all_references_positive
                          ? Validation::positive
                          : validate_reference(instance, lexicon);
  if (report.validation == Validation::positive) {
    bundle.positives.push_back(
        make_summary(instance.reference, Provenance::reference_validated));
  }
  for (auto& s : extract_positive_sentences(instance, lexicon, profile,
                                            context.paraphraser,
                                            bundle.positives.size(),
                                            &instance.reference)) {
    bundle.positives.push_back(std::move(s));
  }

  const EntityTagger tagger =
      context.entity_tagger ? context.entity_tagger
                            : EntityTagger([&lexicon](std::string_view t) {
                                return tag_medical_terms(t, lexicon);
                              });
  const auto source = instance.source_text();
  const auto& reference = instance.reference;
  const std::uint64_t instance_seed = derive_seed(profile.seed, instance.id);

  std::set<std::string, std::less<>> positive_texts;
  for (const auto& s : bundle.positives) positive_texts.insert(s.text);

  for (const auto rule : profile.negative_rules) {
    Rng rng(derive_seed(instance_seed, to_string(rule)));
    std::vector<LabeledSummary> produced;
    switch (rule) {
      case NegativeRule::failed_reference:
        if (!profile.all_references_positive &&
            report.validation == Validation::negative) {
          produced.push_back(
              make_summary(reference, Provenance::reference_failed_validation));
        }
        break;
      case NegativeRule::replace_concept: {
        std::vector<std::string> used;
        for (std::size_t m = 0; m < profile.replace_multiplicity; ++m) {
          auto s = perturb_replace_concept(reference, lexicon, source, rng, used);
          if (!s) break;
          used.push_back(lexicon.canonicalize(s->edits.front().original));
          produced.push_back(std::move(*s));
        }
        break;
      }
      case NegativeRule::append_concept:
        if (auto s = perturb_append_concept(reference, lexicon, source, rng)) {
          produced.push_back(std::move(*s));
        }
        break;
      case NegativeRule::change_attribute:
        if (auto s = perturb_attribute(reference, rng, instance.language)) {
          produced.push_back(std::move(*s));
        }
        break;
      case NegativeRule::entity_swap:
        if (auto s = perturb_entity_swap(reference, tagger, rng)) {
          produced.push_back(std::move(*s));
        }
        break;
      case NegativeRule::logic_inversion:
        if (auto s = perturb_logic_inversion(reference, context.unigrams,
                                             instance.language)) {
          produced.push_back(std::move(*s));
        }
        break;
    }
    std::erase_if(produced, [&](const LabeledSummary& s) {
      return positive_texts.count(s.text) > 0;
    });
    if (produced.empty()) report.skipped.push_back(rule);
    for (auto& s : produced) bundle.negatives.push_back(std::move(s));
  }

  if (bundle.positives.size() < profile.min_positives) {
    throw Error("instance " + instance.id + ": only " +
                std::to_string(bundle.positives.size()) + " positive summaries (need " +
                std::to_string(profile.min_positives) + ")");
  }
  if (bundle.negatives.empty()) {
    throw Error("instance " + instance.id + ": no negative summary could be built");
  }
  return report;
}

}  // namespace medfaith
