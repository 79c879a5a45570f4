#include "medfaith/annotation.hpp"

#include "json_util.hpp"
#include "medfaith/error.hpp"

namespace medfaith {

using detail::json;
using detail::ordered_json;

std::string_view to_string(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::entity_relationship: return "entity_relationship";
    case ErrorCategory::entity: return "entity";
    case ErrorCategory::negation: return "negation";
    case ErrorCategory::question: return "question";
    case ErrorCategory::modifier: return "modifier";
    case ErrorCategory::template_: return "template";
    case ErrorCategory::extraneous_fact: return "extraneous_fact";
    case ErrorCategory::low_specificity: return "low_specificity";
    case ErrorCategory::none: return "none";
  }
  return "none";
}

std::optional<ErrorCategory> parse_error_category(std::string_view name) noexcept {
  for (auto c : kErrorCategories) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::string serialize_annotation(const ErrorAnnotation& annotation) {
  ordered_json j;
  j["instance_id"] = annotation.instance_id;
  j["category"] = to_string(annotation.category);
  j["annotator_id"] = annotation.annotator_id;
  return detail::dump(j);
}

namespace {

ErrorAnnotation from_json(const json& j) {
  ErrorAnnotation a;
  a.instance_id = detail::require_string(j, "instance_id");
  const auto name = detail::require_string(j, "category");
  const auto category = parse_error_category(name);
  if (!category) throw Error("unknown error category \"" + name + "\"");
  a.category = *category;
  a.annotator_id = detail::require_string(j, "annotator_id");
  return a;
}

}  // namespace

ErrorAnnotation parse_annotation(std::string_view json_line) {
  try {
    return from_json(json::parse(json_line));
  } catch (const json::exception& e) {
    throw Error(std::string("malformed annotation: ") + e.what());
  }
}

std::vector<ErrorAnnotation> load_annotations(const std::filesystem::path& path) {
  std::vector<ErrorAnnotation> out;
  std::vector<RecordDiagnostic> problems;
  for (const auto& line : detail::read_lines(path)) {
    try {
      out.push_back(from_json(json::parse(line.text)));
    } catch (const std::exception& e) {
      problems.push_back({line.number, {}, e.what()});
    }
  }
  if (!problems.empty()) throw InputError(path.string(), std::move(problems));
  return out;
}

}  // namespace medfaith
