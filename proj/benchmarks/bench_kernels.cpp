#include <benchmark/benchmark.h>

#include <random>

#include "medfaith/contrastive.hpp"
#include "medfaith/loss.hpp"
#include "medfaith/mki.hpp"
#include "medfaith/paraphraser.hpp"
#include "medfaith/term_tagger.hpp"
#include "synthetic.hpp"

namespace {

using namespace medfaith;

void BM_TagMedicalTerms(benchmark::State& state) {
  const MedicalLexicon lexicon(Language::english, testing::english_lexicon_entries());
  const auto corpus = testing::english_corpus(64, 1);
  std::size_t bytes = 0;
  for (auto _ : state) {
    for (const auto& inst : corpus) {
      const auto& text = std::get<std::string>(inst.source);
      benchmark::DoNotOptimize(tag_medical_terms(text, lexicon));
      bytes += text.size();
    }
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(bytes));
}
BENCHMARK(BM_TagMedicalTerms);

void BM_BuildBundle(benchmark::State& state) {
  const MedicalLexicon lexicon(Language::english, testing::english_lexicon_entries());
  const auto unigrams = UnigramConfig::defaults(Language::english);
  const StubParaphraser stub;
  const BuildContext ctx{lexicon, unigrams, stub, {}};
  const auto profile = *RuleProfile::builtin("hqs");
  const auto corpus = testing::english_corpus(64, 2);
  for (auto _ : state) {
    for (const auto& inst : corpus) {
      benchmark::DoNotOptimize(build_contrastive_bundle(inst, profile, ctx));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.size()));
}
BENCHMARK(BM_BuildBundle);

void BM_ContrastiveLoss(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(3);
  std::normal_distribution<double> g;
  std::vector<Vector> P(4, Vector(dim)), N(6, Vector(dim));
  for (auto* set : {&P, &N})
    for (auto& v : *set)
      for (auto& x : v) x = g(gen);
  for (auto _ : state) benchmark::DoNotOptimize(contrastive_loss(P, N, LossConfig{}));
}
BENCHMARK(BM_ContrastiveLoss)->Arg(64)->Arg(768);

void BM_BuildBmVector(benchmark::State& state) {
  const MedicalLexicon lexicon(Language::english, testing::english_lexicon_entries());
  const auto unigrams = UnigramConfig::defaults(Language::english);
  const auto corpus = testing::english_corpus(64, 4);
  const Vocabulary vocab(testing::english_vocabulary(corpus));
  for (auto _ : state) {
    for (const auto& inst : corpus) {
      benchmark::DoNotOptimize(build_bm_vector(inst.reference, lexicon, unigrams, vocab));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.size()));
}
BENCHMARK(BM_BuildBmVector);

void BM_MkiLossSparse(benchmark::State& state) {
  const auto v = static_cast<std::size_t>(state.range(0));
  MkiVector bm{"x", std::vector<std::int64_t>(v, 0)};
  for (std::size_t i = 0; i < v; i += 97) bm.counts[i] = 2;
  Vector logits(v, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(mki_loss(bm, logits));
}
BENCHMARK(BM_MkiLossSparse)->Arg(32000)->Arg(250000);

}  // namespace

BENCHMARK_MAIN();
