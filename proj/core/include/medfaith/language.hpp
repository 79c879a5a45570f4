#pragma once

#include <optional>
#include <string_view>

namespace medfaith {

enum class Language { english, chinese };

std::string_view to_string(Language language) noexcept;
std::optional<Language> parse_language(std::string_view name) noexcept;

}  // namespace medfaith
