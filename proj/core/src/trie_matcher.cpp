#include "medfaith/trie_matcher.hpp"

namespace medfaith {

namespace {

constexpr std::uint64_t edge_key(std::int32_t node, unsigned char byte) {
  return (static_cast<std::uint64_t>(node) << 8) | byte;
}

}  // namespace

std::int32_t TrieMatcher::child(std::int32_t node, unsigned char byte) const {
  const auto it = edges_.find(edge_key(node, byte));
  return it == edges_.end() ? -1 : it->second;
}

bool TrieMatcher::insert(std::string_view key, std::int32_t value) {
  std::int32_t node = 0;
  for (unsigned char c : key) {
    auto [it, inserted] = edges_.try_emplace(
        edge_key(node, c), static_cast<std::int32_t>(values_.size()));
    if (inserted) values_.push_back(kNoValue);
    node = it->second;
  }
  if (values_[node] != kNoValue) return false;
  values_[node] = value;
  ++keys_;
  return true;
}

TrieMatcher::Hit TrieMatcher::longest_at(
    std::string_view text, std::size_t pos,
    const std::function<bool(std::size_t)>& accept_end) const {
  Hit best;
  std::int32_t node = 0;
  for (std::size_t i = pos; i < text.size(); ++i) {
    node = child(node, static_cast<unsigned char>(text[i]));
    if (node < 0) break;
    if (values_[node] != kNoValue && (!accept_end || accept_end(i + 1))) {
      best = Hit{i + 1, values_[node]};
    }
  }
  return best;
}

void TrieMatcher::all_at(std::string_view text, std::size_t pos,
                         const std::function<void(const Hit&)>& visit) const {
  std::int32_t node = 0;
  for (std::size_t i = pos; i < text.size(); ++i) {
    node = child(node, static_cast<unsigned char>(text[i]));
    if (node < 0) return;
    if (values_[node] != kNoValue) visit(Hit{i + 1, values_[node]});
  }
}

}  // namespace medfaith
