#include "medfaith/summary_sets.hpp"

#include <algorithm>
#include <set>

#include "json_util.hpp"
#include "medfaith/error.hpp"

namespace medfaith {

using detail::json;
using detail::ordered_json;

Polarity polarity_of(Provenance provenance) noexcept {
  switch (provenance) {
    case Provenance::reference_validated:
    case Provenance::extracted_sentence:
    case Provenance::back_translation:
    case Provenance::first_utterance:
      return Polarity::positive;
    default:
      return Polarity::negative;
  }
}

std::string_view to_string(Polarity polarity) noexcept {
  return polarity == Polarity::positive ? "positive" : "negative";
}

std::string_view to_string(Provenance provenance) noexcept {
  switch (provenance) {
    case Provenance::reference_validated: return "reference_validated";
    case Provenance::reference_failed_validation: return "reference_failed_validation";
    case Provenance::extracted_sentence: return "extracted_sentence";
    case Provenance::back_translation: return "back_translation";
    case Provenance::first_utterance: return "first_utterance";
    case Provenance::concept_replaced: return "concept_replaced";
    case Provenance::concept_appended: return "concept_appended";
    case Provenance::attribute_changed: return "attribute_changed";
    case Provenance::entity_swapped: return "entity_swapped";
    case Provenance::logic_inverted: return "logic_inverted";
  }
  return "";
}

std::optional<Polarity> parse_polarity(std::string_view name) noexcept {
  if (name == "positive") return Polarity::positive;
  if (name == "negative") return Polarity::negative;
  return std::nullopt;
}

std::optional<Provenance> parse_provenance(std::string_view name) noexcept {
  for (auto p : kAllProvenances) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::string apply_edits(std::string_view text, std::vector<TextEdit> edits) {
  std::sort(edits.begin(), edits.end(), [](const auto& a, const auto& b) {
    return a.start < b.start;
  });
  std::string out;
  std::size_t cursor = 0;
  for (const auto& e : edits) {
    if (e.start < cursor || e.end < e.start || e.end > text.size()) {
      throw Error("overlapping or out-of-range edit");
    }
    out.append(text.substr(cursor, e.start - cursor));
    out.append(e.replacement);
    cursor = e.end;
  }
  out.append(text.substr(cursor));
  return out;
}

LabeledSummary make_summary(std::string text, Provenance provenance) {
  LabeledSummary s;
  s.text = std::move(text);
  s.provenance = provenance;
  s.polarity = polarity_of(provenance);
  return s;
}

std::vector<std::string> check_bundle(const ContrastiveBundle& bundle,
                                      std::size_t min_positives) {
  std::vector<std::string> problems;
  if (bundle.positives.size() < min_positives) {
    problems.push_back("only " + std::to_string(bundle.positives.size()) +
                       " positives");
  }
  if (bundle.negatives.empty()) problems.push_back("no negatives");
  auto check_set = [&](const std::vector<LabeledSummary>& set, Polarity want) {
    for (const auto& s : set) {
      if (s.polarity != want || polarity_of(s.provenance) != want) {
        problems.push_back("polarity mismatch for " +
                           std::string(to_string(s.provenance)));
      }
    }
  };
  check_set(bundle.positives, Polarity::positive);
  check_set(bundle.negatives, Polarity::negative);
  std::set<std::string_view> positive_texts;
  for (const auto& s : bundle.positives) positive_texts.insert(s.text);
  for (const auto& s : bundle.negatives) {
    if (positive_texts.count(s.text)) {
      problems.push_back("text in both sets: " + s.text);
    }
  }
  return problems;
}

namespace {

ordered_json summary_to_json(const LabeledSummary& s) {
  ordered_json j;
  j["text"] = s.text;
  j["polarity"] = to_string(s.polarity);
  j["provenance"] = to_string(s.provenance);
  if (!s.edits.empty()) {
    ordered_json edits = ordered_json::array();
    for (const auto& e : s.edits) {
      ordered_json item;
      item["start"] = e.start;
      item["end"] = e.end;
      item["original"] = e.original;
      item["replacement"] = e.replacement;
      edits.push_back(std::move(item));
    }
    j["edits"] = std::move(edits);
  }
  if (s.via) j["via"] = *s.via;
  return j;
}

LabeledSummary summary_from_json(const json& j) {
  LabeledSummary s;
  s.text = detail::require_string(j, "text");
  const auto polarity = parse_polarity(detail::require_string(j, "polarity"));
  const auto provenance = parse_provenance(detail::require_string(j, "provenance"));
  if (!polarity || !provenance) throw Error("unknown polarity or provenance");
  s.polarity = *polarity;
  s.provenance = *provenance;
  if (j.contains("edits")) {
    for (const auto& e : j.at("edits")) {
      s.edits.push_back({e.at("start").get<std::size_t>(),
                         e.at("end").get<std::size_t>(),
                         detail::require_string(e, "original"),
                         detail::require_string(e, "replacement")});
    }
  }
  if (j.contains("via")) s.via = detail::require_string(j, "via");
  return s;
}

}  // namespace

std::string serialize_bundle(const ContrastiveBundle& bundle) {
  ordered_json j;
  j["instance_id"] = bundle.instance_id;
  ordered_json pos = ordered_json::array();
  for (const auto& s : bundle.positives) pos.push_back(summary_to_json(s));
  ordered_json neg = ordered_json::array();
  for (const auto& s : bundle.negatives) neg.push_back(summary_to_json(s));
  j["positives"] = std::move(pos);
  j["negatives"] = std::move(neg);
  return detail::dump(j);
}

ContrastiveBundle parse_bundle(std::string_view json_line) {
  try {
    const auto j = json::parse(json_line);
    ContrastiveBundle b;
    b.instance_id = detail::require_string(j, "instance_id");
    for (const auto& s : detail::require(j, "positives")) {
      b.positives.push_back(summary_from_json(s));
    }
    for (const auto& s : detail::require(j, "negatives")) {
      b.negatives.push_back(summary_from_json(s));
    }
    return b;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed bundle: ") + e.what());
  }
}

}  // namespace medfaith
