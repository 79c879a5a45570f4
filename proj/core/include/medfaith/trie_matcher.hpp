#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace medfaith {

/// Byte trie used for dictionary lookup and vocabulary segmentation.
class TrieMatcher {
 public:
  static constexpr std::int32_t kNoValue = -1;

  /// Inserts `key` with payload `value`; returns false when the key was
  /// already present (the first value is kept).
  bool insert(std::string_view key, std::int32_t value);

  std::size_t size() const noexcept { return keys_; }

  struct Hit {
    std::size_t end = 0;
    std::int32_t value = kNoValue;
  };

  /// Longest key starting at `pos` whose end satisfies `accept_end`.
  /// Returns a hit with value kNoValue when nothing matches.
  Hit longest_at(std::string_view text, std::size_t pos,
                 const std::function<bool(std::size_t)>& accept_end = {}) const;

  /// Every key starting at `pos`, shortest first.
  void all_at(std::string_view text, std::size_t pos,
              const std::function<void(const Hit&)>& visit) const;

 private:
  std::int32_t child(std::int32_t node, unsigned char byte) const;

  std::unordered_map<std::uint64_t, std::int32_t> edges_;
  std::vector<std::int32_t> values_{kNoValue};  // node 0 is the root
  std::size_t keys_ = 0;
};

}  // namespace medfaith
