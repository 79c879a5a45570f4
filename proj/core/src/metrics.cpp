#include "medfaith/metrics.hpp"

#include <algorithm>

#include "medfaith/error.hpp"
#include "medfaith/term_tagger.hpp"

namespace medfaith {

ConceptF1Result concept_f1(const std::set<std::string>& pred,
                           const std::set<std::string>& ref) {
  ConceptF1Result r;
  r.pred_concepts = pred;
  r.ref_concepts = ref;
  if (pred.empty() && ref.empty()) {
    r.precision = r.recall = r.f1 = 1.0;
    return r;
  }
  std::size_t common = 0;
  for (const auto& c : pred) common += ref.count(c);
  r.precision = pred.empty() ? 0.0 : static_cast<double>(common) / static_cast<double>(pred.size());
  r.recall = ref.empty() ? 0.0 : static_cast<double>(common) / static_cast<double>(ref.size());
  const double denom = r.precision + r.recall;
  r.f1 = denom > 0.0 ? 2.0 * r.precision * r.recall / denom : 0.0;
  return r;
}

ConceptF1Result concept_f1(std::string_view prediction, std::string_view reference,
                           const MedicalLexicon& lexicon) {
  return concept_f1(tagged_term_set(prediction, lexicon),
                    tagged_term_set(reference, lexicon));
}

TaxonomyReport aggregate_error_annotations(
    const std::vector<ErrorAnnotation>& annotations, std::size_t total,
    const TaxonomyOptions& options) {
  std::map<std::string, std::vector<const ErrorAnnotation*>> by_instance;
  for (const auto& a : annotations) {
    if (options.known_ids && !options.known_ids->count(a.instance_id)) {
      throw Error("annotation references unknown instance " + a.instance_id);
    }
    by_instance[a.instance_id].push_back(&a);
  }
  if (by_instance.size() > total) {
    throw Error("annotations cover " + std::to_string(by_instance.size()) +
                " instances but the total is " + std::to_string(total));
  }

  TaxonomyReport report;
  report.total = total;
  for (auto c : kErrorCategories) {
    if (c != ErrorCategory::none) report.counts[c] = 0;
  }

  for (const auto& [id, records] : by_instance) {
    std::map<ErrorCategory, std::size_t> votes;
    bool erroneous = false;
    if (options.multi_label) {
      std::map<ErrorCategory, std::set<std::string>> voters;
      std::set<std::string> annotators;
      for (const auto* a : records) {
        annotators.insert(a->annotator_id);
        voters[a->category].insert(a->annotator_id);
      }
      for (const auto& [category, who] : voters) {
        if (category == ErrorCategory::none || 2 * who.size() <= annotators.size()) continue;
        ++report.counts[category];
        erroneous = true;
      }
    } else {
      for (const auto* a : records) ++votes[a->category];
      std::size_t best = 0;
      for (const auto& [c, n] : votes) best = std::max(best, n);
      std::vector<ErrorCategory> leaders;
      for (const auto& [c, n] : votes) {
        if (n == best) leaders.push_back(c);
      }
      if (leaders.size() > 1) {
        report.needs_adjudication.push_back(id);
        continue;
      }
      if (leaders.front() != ErrorCategory::none) {
        ++report.counts[leaders.front()];
        erroneous = true;
      }
    }
    if (erroneous) ++report.erroneous;
  }

  const auto share = [total](std::size_t count) {
    return total == 0 ? 0.0 : static_cast<double>(count) * 100.0 / static_cast<double>(total);
  };
  for (const auto& [category, count] : report.counts) {
    report.percentages[category] = share(count);
  }
  report.overall_error_percentage = share(report.erroneous);
  return report;
}

}  // namespace medfaith
