#include <gtest/gtest.h>

#include "medfaith/text.hpp"
#include "medfaith/trie_matcher.hpp"

namespace medfaith {
namespace {

TEST(Text, Utf8LengthCountsCodepoints) {
  EXPECT_EQ(text::utf8_length(""), 0u);
  EXPECT_EQ(text::utf8_length("abc"), 3u);
  EXPECT_EQ(text::utf8_length("尘肺ok"), 4u);
}

TEST(Text, WordBoundaries) {
  const std::string s = "the heart-disease clinic";
  EXPECT_TRUE(text::on_word_boundaries(s, 4, 9));    // heart
  EXPECT_FALSE(text::on_word_boundaries(s, 4, 8));   // hear
  EXPECT_FALSE(text::on_word_boundaries(s, 5, 9));   // eart
  EXPECT_TRUE(text::on_word_boundaries(s, 0, s.size()));
}

TEST(Text, SplitEnglishSentences) {
  const auto parts = text::split_sentences("One here. Two? Three!  Four", Language::english);
  ASSERT_EQ(parts.size(), 4u);
  EXPECT_EQ(parts[0], "One here.");
  EXPECT_EQ(parts[1], "Two?");
  EXPECT_EQ(parts[3], "Four");
}

TEST(Text, DecimalPointDoesNotSplit) {
  const auto parts = text::split_sentences("Take 2.5 mg. Then rest.", Language::english);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0], "Take 2.5 mg.");
}

TEST(Text, SplitChineseSentences) {
  const auto parts = text::split_sentences("你好。不能检查出来！还有吗？", Language::chinese);
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[1], "不能检查出来！");
}

TEST(Text, AsciiLowerLeavesMultibyteAlone) {
  EXPECT_EQ(text::ascii_lower("Vitamin K 尘肺"), "vitamin k 尘肺");
}

TEST(TrieMatcher, LongestAndAll) {
  TrieMatcher m;
  EXPECT_TRUE(m.insert("heart", 0));
  EXPECT_TRUE(m.insert("heart disease", 1));
  EXPECT_FALSE(m.insert("heart", 2));
  const std::string s = "heart disease";
  EXPECT_EQ(m.longest_at(s, 0).value, 1);
  EXPECT_EQ(m.longest_at(s, 0, [](std::size_t end) { return end == 5; }).value, 0);
  int hits = 0;
  m.all_at(s, 0, [&](const TrieMatcher::Hit&) { ++hits; });
  EXPECT_EQ(hits, 2);
  EXPECT_EQ(m.longest_at(s, 1).value, TrieMatcher::kNoValue);
}

}  // namespace
}  // namespace medfaith
