#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>

#include "medfaith/error.hpp"
#include "medfaith/mki.hpp"
#include "medfaith/rng.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

namespace medfaith {
namespace {

TEST(Tokenize, LongestMatchAgreesWithExhaustiveOracle) {
  const std::vector<std::string> tokens = {"<unk>", "vita", "min", " k", "v", "i", "t", "a",
                                           "m", "n", " ", "k", "vitam"};
  const Vocabulary vocab(tokens);
  const std::string s = "vitamin k";
  // the greedy answer must be one of the exact segmentations, and the one
  // whose token at every step is the longest available
  const auto all = oracle::all_segmentations(s, tokens);
  ASSERT_FALSE(all.empty());
  const auto got = tokenize_with_vocab(s, vocab);
  EXPECT_NE(std::find(all.begin(), all.end(), got), all.end());
  std::vector<std::size_t> greedy;
  for (const auto& t : oracle::segment(s, tokens)) greedy.push_back(t.index);
  EXPECT_EQ(got, greedy);
}

TEST(Tokenize, VitaMinK) {
  const std::vector<std::string> tokens = {"<unk>", "vita", "min", " k"};
  const auto all = oracle::all_segmentations("vitamin k", tokens);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0], (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(tokenize_with_vocab("vitamin k", Vocabulary(tokens)), all[0]);
}

TEST(Tokenize, EmptyAndUnknown) {
  const Vocabulary vocab({"<unk>", "vita"});
  EXPECT_TRUE(tokenize_with_vocab("", vocab).empty());
  EXPECT_EQ(tokenize_with_vocab("xy尘", vocab), (std::vector<std::size_t>{0, 0, 0}));
  const auto offsets = tokenize_with_offsets("x尘", vocab);
  ASSERT_EQ(offsets.size(), 2u);
  EXPECT_EQ(offsets[1].start, 1u);
  EXPECT_EQ(offsets[1].end, 4u);
}

TEST(Tokenize, MatchesOracleOnRandomText) {
  const auto corpus = testing::english_corpus(20, 4);
  const auto tokens = testing::english_vocabulary(corpus);
  const Vocabulary vocab(tokens);
  for (const auto& inst : corpus) {
    const auto got = tokenize_with_offsets(inst.reference, vocab);
    const auto want = oracle::segment(inst.reference, tokens);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].index, want[i].index);
      EXPECT_EQ(got[i].start, want[i].start);
    }
  }
}

TEST(Vocabulary, RejectsBadInput) {
  EXPECT_THROW(Vocabulary({}), ConfigError);
  EXPECT_THROW(Vocabulary({"<unk>", ""}), ConfigError);
  EXPECT_THROW(Vocabulary({"<unk>", "a", "a"}), ConfigError);
}

TEST(Vocabulary, LoadKeepsSpacesAndStripsCr) {
  const auto dir = testing::scratch_dir("vocab-load");
  {
    std::ofstream out(dir / "v.txt", std::ios::binary);
    out << "<unk>\r\n k\r\nmin\n\n";
  }
  const auto vocab = load_vocabulary(dir / "v.txt");
  ASSERT_EQ(vocab.size(), 3u);
  EXPECT_EQ(vocab.token(1), " k");
  EXPECT_EQ(vocab.index_of("min"), 2u);
  EXPECT_FALSE(vocab.index_of("mi"));
}

struct MkiFixture {
  MedicalLexicon lexicon{Language::english, testing::english_lexicon_entries()};
  UnigramConfig unigrams = UnigramConfig::defaults(Language::english);
  std::vector<std::string> tokens = {"<unk>", " ", "do", "not", "contain", "vitamin", "k",
                                     "Vitamin", "K", "warfarin", "with", "?", "Which",
                                     "vegetables", "all", "clear"};
  Vocabulary vocab{tokens};
  std::size_t at(const std::string& t) const { return *vocab.index_of(t); }
};

TEST(BuildBm, TermContextAndNegation) {
  MkiFixture f;
  const auto bm = build_bm_vector("Which vegetables do not contain Vitamin K?", f.lexicon,
                                  f.unigrams, f.vocab, "fig1");
  EXPECT_EQ(bm.instance_id, "fig1");
  // term tokens
  EXPECT_EQ(bm.counts[f.at("Vitamin")], 1);
  EXPECT_EQ(bm.counts[f.at("K")], 1);
  // the term's space plus the two tokens before its first token ("contain", " ")
  EXPECT_EQ(bm.counts[f.at("contain")], 1);
  EXPECT_EQ(bm.counts[f.at(" ")], 2);
  // negative unigram
  EXPECT_EQ(bm.counts[f.at("not")], 1);
  EXPECT_EQ(bm.counts[f.at("do")], 0);
  EXPECT_EQ(bm.counts[f.at("Which")], 0);
  EXPECT_EQ(bm.total(), 6);
}

TEST(BuildBm, ZeroVectorWithoutInterest) {
  MkiFixture f;
  const auto bm = build_bm_vector("all clear", f.lexicon, f.unigrams, f.vocab);
  EXPECT_EQ(bm.total(), 0);
  EXPECT_TRUE(bm.sparse().empty());
  EXPECT_EQ(bm.counts.size(), f.vocab.size());
}

TEST(BuildBm, RepeatedTermCountsTwice) {
  MkiFixture f;
  const auto bm = build_bm_vector("warfarin with warfarin", f.lexicon, f.unigrams, f.vocab);
  EXPECT_EQ(bm.counts[f.at("warfarin")], 2);
  // the second occurrence's context: "with" and a space
  EXPECT_EQ(bm.counts[f.at("with")], 1);
}

TEST(BuildBm, TermAtTextStartHasNoContext) {
  MkiFixture f;
  const auto bm = build_bm_vector("warfarin", f.lexicon, f.unigrams, f.vocab);
  EXPECT_EQ(bm.total(), 1);
}

TEST(BuildBm, MatchesHistogramOracle) {
  const auto corpus = testing::english_corpus(60, 21);
  const auto tokens = testing::english_vocabulary(corpus);
  const Vocabulary vocab(tokens);
  const auto entries = testing::english_lexicon_entries();
  const MedicalLexicon lex(Language::english, entries);
  std::vector<std::string> terms;
  for (const auto& e : entries) terms.push_back(e.term);
  const auto unigrams = UnigramConfig::defaults(Language::english);
  for (const auto& inst : corpus) {
    const auto bm = build_bm_vector(inst.reference, lex, unigrams, vocab);
    EXPECT_EQ(bm.counts, oracle::bm_histogram(inst.reference, terms, unigrams.negative_unigrams,
                                              tokens, Language::english))
        << inst.reference;
  }
}

TEST(BuildBm, ChineseMatchesHistogramOracle) {
  const auto corpus = testing::chinese_dialogue_corpus(40, 2);
  const auto entries = testing::chinese_lexicon_entries();
  std::vector<std::string> terms;
  for (const auto& e : entries) terms.push_back(e.term);
  const MedicalLexicon lex(Language::chinese, entries);
  const auto unigrams = UnigramConfig::defaults(Language::chinese);
  std::vector<std::string> tokens = {"<unk>", "可以", "不", "，", "。", "天", "复查", "有效"};
  for (const auto& t : terms) tokens.push_back(t);
  tokens.push_back("肺");
  const Vocabulary vocab(tokens);
  for (const auto& inst : corpus) {
    EXPECT_EQ(build_bm_vector(inst.reference, lex, unigrams, vocab).counts,
              oracle::bm_histogram(inst.reference, terms, unigrams.negative_unigrams, tokens,
                                   Language::chinese))
        << inst.reference;
  }
}

TEST(BuildBm, VocabularyPermutationEquivariance) {
  const auto corpus = testing::english_corpus(30, 8);
  auto tokens = testing::english_vocabulary(corpus);
  const MedicalLexicon lex(Language::english, testing::english_lexicon_entries());
  const auto unigrams = UnigramConfig::defaults(Language::english);
  const Vocabulary original(tokens);

  // keep the unknown token at index 0, shuffle the rest
  std::vector<std::size_t> perm(tokens.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937 gen(99);
  std::shuffle(perm.begin() + 1, perm.end(), gen);
  std::vector<std::string> permuted(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) permuted[perm[i]] = tokens[i];
  const Vocabulary shuffled(permuted);

  for (const auto& inst : corpus) {
    const auto a = build_bm_vector(inst.reference, lex, unigrams, original);
    const auto b = build_bm_vector(inst.reference, lex, unigrams, shuffled);
    for (std::size_t i = 0; i < tokens.size(); ++i) EXPECT_EQ(a.counts[i], b.counts[perm[i]]);
  }
}

TEST(BuildBm, IgnoresSource) {
  MkiFixture f;
  const std::string ref = "do not contain Vitamin K";
  const auto a = build_bm_vector(ref, f.lexicon, f.unigrams, f.vocab);
  EXPECT_EQ(a, build_bm_vector(ref, f.lexicon, f.unigrams, f.vocab));
}

TEST(MkiJson, SparseRoundTrip) {
  MkiVector v{"x", {0, 3, 0, 0, 1}};
  const auto line = serialize_mki(v);
  EXPECT_EQ(line, R"({"instance_id":"x","entries":[[1,3],[4,1]],"vocab_size":5})");
  EXPECT_EQ(parse_mki(line), v);
  EXPECT_THROW(parse_mki(R"({"instance_id":"x","entries":[[7,1]],"vocab_size":5})"), Error);
}

}  // namespace
}  // namespace medfaith
