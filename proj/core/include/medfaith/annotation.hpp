#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace medfaith {

/// Faithfulness error categories. The first four are intrinsic, the next
/// three extrinsic; modifier errors are intrinsic but carry no reported share.
enum class ErrorCategory {
  entity_relationship,
  entity,
  negation,
  question,
  modifier,
  template_,
  extraneous_fact,
  low_specificity,
  none,
};

inline constexpr std::array kErrorCategories = {
    ErrorCategory::entity_relationship, ErrorCategory::entity,
    ErrorCategory::negation,            ErrorCategory::question,
    ErrorCategory::modifier,            ErrorCategory::template_,
    ErrorCategory::extraneous_fact,     ErrorCategory::low_specificity,
    ErrorCategory::none,
};

std::string_view to_string(ErrorCategory category) noexcept;
std::optional<ErrorCategory> parse_error_category(std::string_view name) noexcept;

struct ErrorAnnotation {
  std::string instance_id;
  ErrorCategory category = ErrorCategory::none;
  std::string annotator_id;

  friend bool operator==(const ErrorAnnotation&,
                         const ErrorAnnotation&) = default;
};

std::string serialize_annotation(const ErrorAnnotation& annotation);
ErrorAnnotation parse_annotation(std::string_view json_line);
std::vector<ErrorAnnotation> load_annotations(const std::filesystem::path& path);

}  // namespace medfaith
