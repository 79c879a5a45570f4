#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <random>
#include <regex>

#include "medfaith/error.hpp"
#include "medfaith/rng.hpp"
#include "medfaith/term_tagger.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

namespace medfaith {
namespace {

MedicalLexicon english_lexicon() {
  return MedicalLexicon(Language::english, testing::english_lexicon_entries());
}

std::vector<std::string> surfaces(const std::vector<TermSpan>& spans) {
  std::vector<std::string> out;
  for (const auto& s : spans) out.push_back(s.term);
  return out;
}

/// Random English text mixing lexicon terms (random case), partial words and
/// filler, so that boundaries and nesting are exercised.
std::string random_english_text(Rng& rng, const std::vector<std::string>& terms) {
  static const std::vector<std::string> filler = {
      "the", "of", "not", "heartbeat", "warfarins", "and", "2.5", "mg", "-", ",", "(", ")",
      "kidney-stones", "iron's", "no", "T2", "尘肺"};
  std::string out;
  const auto words = 3 + rng.below(12);
  for (std::uint64_t w = 0; w < words; ++w) {
    std::string piece = rng.below(3) == 0 ? filler[rng.below(filler.size())]
                                          : terms[rng.below(terms.size())];
    for (auto& c : piece) {
      if (rng.below(4) == 0 && c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    }
    if (!out.empty()) out += rng.below(5) == 0 ? "" : " ";
    out += piece;
  }
  return out;
}

TEST(TagMedicalTerms, FindsTermAfterNegation) {
  const auto lex = english_lexicon();
  const auto spans = tag_medical_terms("no evidence of tuberculosis", lex);
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_EQ(spans[0].term, "tuberculosis");
  EXPECT_EQ(spans[0].start, 15u);
  EXPECT_EQ(spans[0].end, 27u);
}

TEST(TagMedicalTerms, EmptyText) {
  EXPECT_TRUE(tag_medical_terms("", english_lexicon()).empty());
}

TEST(TagMedicalTerms, PrefersLongestMatch) {
  const auto spans = tag_medical_terms("history of heart disease", english_lexicon());
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_EQ(spans[0].canonical, "heart disease");
}

TEST(TagMedicalTerms, CaseInsensitiveWithSurfaceKept) {
  const auto spans = tag_medical_terms("Avoid Vitamin K with WARFARIN.", english_lexicon());
  EXPECT_EQ(surfaces(spans), (std::vector<std::string>{"Vitamin K", "WARFARIN"}));
  EXPECT_EQ(spans[0].canonical, "vitamin k");
}

TEST(TagMedicalTerms, RespectsWordBoundaries) {
  EXPECT_TRUE(tag_medical_terms("heartbeat irons", english_lexicon()).empty());
  EXPECT_EQ(surfaces(tag_medical_terms("kidney-stones", english_lexicon())),
            (std::vector<std::string>{"kidney"}));
}

TEST(TagMedicalTerms, ChineseSubstrings) {
  const MedicalLexicon lex(Language::chinese, testing::chinese_lexicon_entries());
  const auto spans = tag_medical_terms("尘肺在潜伏期可以检查出来，建议复查胸片。", lex);
  EXPECT_EQ(surfaces(spans), (std::vector<std::string>{"尘肺", "胸片"}));
  EXPECT_EQ(spans[0].start, 0u);
  EXPECT_EQ(spans[1].start, std::string("尘肺在潜伏期可以检查出来，建议复查").size());
}

TEST(TagMedicalTerms, MatchesBruteForceOracle) {
  const auto entries = testing::english_lexicon_entries();
  std::vector<std::string> terms;
  for (const auto& e : entries) terms.push_back(e.term);
  const MedicalLexicon lex(Language::english, entries);
  Rng rng(123);
  for (int trial = 0; trial < 500; ++trial) {
    const auto s = random_english_text(rng, terms);
    const auto spans = tag_medical_terms(s, lex);
    const auto expected = oracle::tag(s, terms, Language::english);
    ASSERT_EQ(spans.size(), expected.size()) << s;
    for (std::size_t i = 0; i < spans.size(); ++i) {
      EXPECT_EQ(spans[i].canonical, expected[i].canonical) << s;
      EXPECT_EQ(spans[i].start, expected[i].start) << s;
      EXPECT_EQ(spans[i].end, expected[i].end) << s;
    }
  }
}

TEST(TagMedicalTerms, ChineseMatchesBruteForceOracle) {
  const auto entries = testing::chinese_lexicon_entries();
  std::vector<std::string> terms;
  for (const auto& e : entries) terms.push_back(e.term);
  terms.push_back("肺炎支原体");
  std::vector<LexiconEntry> with_nested = entries;
  with_nested.push_back({"肺炎支原体", std::nullopt});
  const MedicalLexicon lex(Language::chinese, with_nested);
  const std::vector<std::string> filler = {"可以", "不", "吃", "天", "3", "，", "。", "肺"};
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    std::string s;
    for (auto k = 2 + rng.below(10); k > 0; --k) {
      s += rng.coin() ? terms[rng.below(terms.size())] : filler[rng.below(filler.size())];
    }
    const auto spans = tag_medical_terms(s, lex);
    const auto expected = oracle::tag(s, terms, Language::chinese);
    ASSERT_EQ(spans.size(), expected.size()) << s;
    for (std::size_t i = 0; i < spans.size(); ++i) {
      EXPECT_EQ(spans[i].start, expected[i].start) << s;
      EXPECT_EQ(spans[i].end, expected[i].end) << s;
    }
  }
}

TEST(TagMedicalTerms, SpansSliceBackAndDoNotOverlap) {
  const auto lex = english_lexicon();
  std::vector<std::string> terms = lex.terms();
  Rng rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = random_english_text(rng, terms);
    const auto spans = tag_medical_terms(s, lex);
    for (std::size_t i = 0; i < spans.size(); ++i) {
      EXPECT_EQ(s.substr(spans[i].start, spans[i].end - spans[i].start), spans[i].term);
      EXPECT_TRUE(lex.contains(spans[i].term));
      if (i > 0) EXPECT_LE(spans[i - 1].end, spans[i].start);
    }
    // tagging is a pure function of (text, lexicon)
    EXPECT_EQ(tag_medical_terms(s, lex), spans);
  }
}

TEST(TagMedicalTerms, IndependentOfLexiconOrder) {
  auto entries = testing::english_lexicon_entries();
  const MedicalLexicon a(Language::english, entries);
  std::mt19937 shuffle_rng(4);
  std::shuffle(entries.begin(), entries.end(), shuffle_rng);
  const MedicalLexicon b(Language::english, entries);
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_english_text(rng, a.terms());
    EXPECT_EQ(tag_medical_terms(s, a), tag_medical_terms(s, b));
  }
}

TEST(OccurringTermSet, IncludesNestedTerms) {
  const auto set = occurring_term_set("heart disease and kidney stones", english_lexicon());
  EXPECT_EQ(set, (std::set<std::string>{"heart", "heart disease", "kidney", "kidney stones"}));
  EXPECT_EQ(tagged_term_set("heart disease and kidney stones", english_lexicon()),
            (std::set<std::string>{"heart disease", "kidney stones"}));
}

TEST(NegativeUnigrams, EnglishNot) {
  const auto spans = find_negative_unigrams("do not contain Vitamin K",
                                            UnigramConfig::defaults(Language::english),
                                            Language::english);
  EXPECT_EQ(surfaces(spans), (std::vector<std::string>{"not"}));
}

TEST(NegativeUnigrams, NoneInPlainText) {
  EXPECT_TRUE(find_negative_unigrams("all clear", UnigramConfig::defaults(Language::english),
                                     Language::english)
                  .empty());
  // "note" and "know" contain unigrams only as substrings
  EXPECT_TRUE(find_negative_unigrams("note I know", UnigramConfig::defaults(Language::english),
                                     Language::english)
                  .empty());
}

TEST(NegativeUnigrams, ChineseBu) {
  const auto spans = find_negative_unigrams(
      "不能检查出来", UnigramConfig::defaults(Language::chinese), Language::chinese);
  EXPECT_EQ(surfaces(spans), (std::vector<std::string>{"不"}));
}

TEST(NegativeUnigrams, ContractionsAndLongestChinese) {
  EXPECT_EQ(surfaces(find_negative_unigrams("It doesn't hurt, Don't worry",
                                            UnigramConfig::defaults(Language::english),
                                            Language::english)),
            (std::vector<std::string>{"doesn't", "Don't"}));
  EXPECT_EQ(surfaces(find_negative_unigrams("没有发烧", UnigramConfig::defaults(Language::chinese),
                                            Language::chinese)),
            (std::vector<std::string>{"没有"}));
}

TEST(UnigramConfig, Validation) {
  EXPECT_NO_THROW(UnigramConfig::defaults(Language::english).validate());
  EXPECT_NO_THROW(UnigramConfig::defaults(Language::chinese).validate());
  EXPECT_THROW((UnigramConfig{{}, std::nullopt}.validate()), ConfigError);
  EXPECT_THROW((UnigramConfig{{""}, std::nullopt}.validate()), ConfigError);
  EXPECT_THROW((UnigramConfig{{"not"}, InversionPair{"can", "can"}}.validate()), ConfigError);
}

TEST(NumericAttributes, Integer) {
  const auto spans = detect_numeric_attributes("5 doses");
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_EQ(spans[0].term, "5");
  EXPECT_EQ(spans[0].start, 0u);
}

TEST(NumericAttributes, Decimal) {
  EXPECT_EQ(surfaces(detect_numeric_attributes("take 2.5 mg twice")),
            (std::vector<std::string>{"2.5"}));
}

TEST(NumericAttributes, SkipsIdentifiersInEnglishOnly) {
  EXPECT_EQ(surfaces(detect_numeric_attributes("T2 scan at 10.")),
            (std::vector<std::string>{"10"}));
  EXPECT_EQ(surfaces(detect_numeric_attributes("吃3天药", Language::chinese)),
            (std::vector<std::string>{"3"}));
}

TEST(NumericAttributes, MatchesRegexOracle) {
  const std::regex number(R"((^|[^A-Za-z0-9.])([0-9]+(\.[0-9]+)?)(?![A-Za-z0-9]|\.[0-9]))");
  const std::string alphabet = "0123456789. aZ-";
  Rng rng(2024);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s;
    for (auto k = rng.below(14); k > 0; --k) s += alphabet[rng.below(alphabet.size())];
    // The regex oracle covers the unambiguous shapes: no digit run touching a
    // dot that is not a decimal point.
    if (s.find("..") != std::string::npos) continue;
    std::vector<std::string> expected;
    bool ambiguous = false;
    for (std::size_t i = 0; i < s.size();) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) { ++i; continue; }
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j + 1 < s.size() && s[j] == '.' && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
        ++j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      }
      if (j < s.size() && s[j] == '.' ) ambiguous = true;
      if (i > 0 && s[i - 1] == '.') ambiguous = true;
      i = j;
    }
    if (ambiguous) continue;
    for (auto it = std::sregex_iterator(s.begin(), s.end(), number); it != std::sregex_iterator();
         ++it) {
      const auto m = (*it)[2].str();
      const auto start = static_cast<std::size_t>(it->position(2));
      const bool glued_left = start > 0 && std::isalpha(static_cast<unsigned char>(s[start - 1]));
      if (!glued_left) expected.push_back(m);
    }
    EXPECT_EQ(surfaces(detect_numeric_attributes(s)), expected) << '"' << s << '"';
  }
}

}  // namespace
}  // namespace medfaith
