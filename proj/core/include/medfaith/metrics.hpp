#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "medfaith/annotation.hpp"
#include "medfaith/lexicon.hpp"

namespace medfaith {

struct ConceptF1Result {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::set<std::string> pred_concepts;
  std::set<std::string> ref_concepts;
};

/// Set-based concept overlap. Two empty sets score 1.0 everywhere.
ConceptF1Result concept_f1(const std::set<std::string>& pred,
                           const std::set<std::string>& ref);
ConceptF1Result concept_f1(std::string_view prediction,
                           std::string_view reference,
                           const MedicalLexicon& lexicon);

struct TaxonomyOptions {
  bool multi_label = false;
  /// When set, annotations for other ids are rejected.
  std::optional<std::set<std::string>> known_ids;
};

struct TaxonomyReport {
  std::size_t total = 0;
  std::map<ErrorCategory, std::size_t> counts;  // excludes none
  std::map<ErrorCategory, double> percentages;  // count * 100 / total
  std::size_t erroneous = 0;                    // instances with any error
  double overall_error_percentage = 0.0;
  std::vector<std::string> needs_adjudication;  // tied single-label votes
};

/// Resolves each instance's label by plurality across annotators (ties are
/// flagged and left uncounted) and reports shares of `total`. In multi-label
/// mode an instance carries every category marked by more than half of its
/// annotators. Throws Error on unknown ids or when ids exceed `total`.
TaxonomyReport aggregate_error_annotations(
    const std::vector<ErrorAnnotation>& annotations, std::size_t total,
    const TaxonomyOptions& options = {});

}  // namespace medfaith
