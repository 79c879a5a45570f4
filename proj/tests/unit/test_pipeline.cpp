#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "medfaith/error.hpp"
#include "medfaith/loss.hpp"
#include "medfaith/pipeline.hpp"
#include "medfaith/run_config.hpp"
#include "medfaith/summary_sets.hpp"
#include "synthetic.hpp"

namespace medfaith {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const fs::path kToy = MEDFAITH_TOY_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::vector<std::string> out;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

/// Toy run config with outputs redirected to a scratch directory.
RunConfig toy_config(const std::string& name, json overrides = json::object()) {
  json j = json::parse(slurp(kToy / "run_hqs.json"));
  j["out"] = testing::scratch_dir(name).string();
  for (auto& [k, v] : overrides.items()) j[k] = v;
  return parse_run_config(j.dump(), kToy);
}

TEST(RunConfig, ResolvesRelativePaths) {
  const auto cfg = load_run_config(kToy / "run_hqs.json");
  EXPECT_EQ(cfg.corpus, kToy / "corpus_en.jsonl");
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.profile().name, "hqs");
  EXPECT_EQ(cfg.profile().seed, 42u);
}

TEST(RunConfig, RejectsUnknownKeysAndProfiles) {
  EXPECT_THROW(parse_run_config(R"({"corpus":"c","typo":1})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"corpus":"c","loss":{"temp":1}})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"corpus":"c","profile":"xyz"})").profile(), ConfigError);
}

TEST(RunConfig, ProfileLossDefaultsAndPartialOverride) {
  const auto rrs = default_loss_for("rrs");
  EXPECT_EQ(rrs.lambda_cl, 2.0);
  EXPECT_EQ(rrs.lambda_mki, 0.0014);
  EXPECT_EQ(default_loss_for("hqs").lambda_mki, 0.001);
  const auto cfg = parse_run_config(R"({"corpus":"c","profile":"rrs","loss":{"tau":0.5}})");
  EXPECT_EQ(cfg.loss().tau, 0.5);
  EXPECT_EQ(cfg.loss().lambda_cl, 2.0);
  EXPECT_THROW(parse_run_config(R"({"corpus":"c","loss":{"tau":0}})").loss(), ConfigError);
}

TEST(RunConfig, InlineProfileAndUnigrams) {
  const auto cfg = parse_run_config(R"({
    "corpus": "c",
    "profile": {"name": "mine", "positive_rules": ["shared_term_sentence", "back_translate"],
                "negative_rules": ["logic_inversion"]},
    "unigrams": {"negative_unigrams": ["not"],
                 "inversion_pair": {"positive": "can", "negative": "cannot"}}})");
  const auto p = cfg.profile();
  EXPECT_EQ(p.name, "mine");
  EXPECT_TRUE(p.enables(NegativeRule::logic_inversion));
  const auto u = cfg.unigrams_for(Language::english);
  ASSERT_TRUE(u.inversion_pair);
  EXPECT_NO_THROW(p.validate_for(Language::english, u));
}

TEST(BuildSets, ToyCorpusGivesOneBundlePerInstance) {
  const auto cfg = toy_config("pipe-build");
  std::ostringstream diag;
  const auto r = cmd_build_sets(cfg, diag);
  EXPECT_EQ(r.exit_code, 0) << diag.str();
  const auto bundles = lines_of(cfg.out_dir / "bundles.jsonl");
  ASSERT_EQ(bundles.size(), 3u);
  for (const auto& line : bundles) {
    const auto b = parse_bundle(line);
    EXPECT_GE(b.positives.size(), 2u);
    EXPECT_TRUE(check_bundle(b).empty());
  }
  const auto stats = json::parse(slurp(cfg.out_dir / "build_sets_stats.json"));
  EXPECT_EQ(stats["bundles"], 3);
  EXPECT_NEAR(stats["validation_pass_rate"].get<double>(), 2.0 / 3.0, 1e-12);
  EXPECT_TRUE(stats["rule_skips"].contains("entity_swap"));
}

TEST(BuildSets, ReplayIsByteIdenticalAcrossWorkerCounts) {
  const auto a = toy_config("pipe-replay-a");
  const auto b = toy_config("pipe-replay-b");
  std::ostringstream diag;
  ::setenv("MEDFAITH_WORKERS", "1", 1);
  cmd_build_sets(a, diag);
  ::setenv("MEDFAITH_WORKERS", "4", 1);
  cmd_build_sets(b, diag);
  ::unsetenv("MEDFAITH_WORKERS");
  EXPECT_EQ(slurp(a.out_dir / "bundles.jsonl"), slurp(b.out_dir / "bundles.jsonl"));
  EXPECT_EQ(slurp(a.out_dir / "build_sets_stats.json"),
            slurp(b.out_dir / "build_sets_stats.json"));
}

TEST(BuildSets, MdsOnEnglishIsAConfigError) {
  const auto cfg = toy_config("pipe-mds-en", {{"profile", "mds"}});
  std::ostringstream diag;
  EXPECT_THROW(cmd_build_sets(cfg, diag), ConfigError);
}

TEST(BuildSets, PerInstanceFailuresExitNonzero) {
  const auto dir = testing::scratch_dir("pipe-failures");
  testing::write_lines(dir / "lex.txt", {"aspirin"});
  testing::write_lines(
      dir / "corpus.jsonl",
      {R"({"id":"ok-1","source":"Aspirin daily. Twice.","reference":"Aspirin 2 times.","language":"english"})",
       R"({"id":"stuck-2","source":"Aspirin daily. Nothing else.","reference":"Aspirin.","language":"english"})"});
  const auto cfg = parse_run_config(
      json{{"corpus", "corpus.jsonl"}, {"lexicon", "lex.txt"}, {"profile", "hqs"}, {"out", "out"}}
          .dump(),
      dir);
  std::ostringstream diag;
  const auto r = cmd_build_sets(cfg, diag);
  EXPECT_EQ(r.exit_code, 1);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_NE(r.errors[0].find("stuck-2"), std::string::npos);
  EXPECT_NE(diag.str().find("stuck-2"), std::string::npos);
  EXPECT_EQ(lines_of(dir / "out" / "bundles.jsonl").size(), 1u);
}

TEST(BuildMki, OneVectorPerInstance) {
  const auto cfg = toy_config("pipe-mki");
  std::ostringstream diag;
  EXPECT_EQ(cmd_build_mki(cfg, diag).exit_code, 0);
  const auto lines = lines_of(cfg.out_dir / "mki.jsonl");
  ASSERT_EQ(lines.size(), 3u);
  const auto first = json::parse(lines[0]);
  EXPECT_EQ(first["instance_id"], "hqs-001");
  EXPECT_FALSE(first["entries"].empty());
}

TEST(EvalLoss, MatchesKernelsAndWritesGradients) {
  const auto cfg = toy_config("pipe-loss");
  std::ostringstream diag;
  cmd_build_mki(cfg, diag);
  const auto r = cmd_eval_loss(cfg, {true, true, 1e-5}, diag);
  EXPECT_EQ(r.exit_code, 0) << diag.str();
  const auto lines = lines_of(cfg.out_dir / "losses.jsonl");
  ASSERT_EQ(lines.size(), 3u);

  std::map<std::string, json> reps;
  for (const auto& l : lines_of(kToy / "representations.jsonl")) {
    const auto j = json::parse(l);
    reps[j["id"]] = j;
  }
  for (const auto& l : lines) {
    const auto j = json::parse(l);
    const auto& rep = reps.at(j["id"]);
    const auto cl = contrastive_loss(rep["positives"].get<std::vector<Vector>>(),
                                     rep["negatives"].get<std::vector<Vector>>(), cfg.loss());
    EXPECT_EQ(j["cl"].get<double>(), cl.loss);
    EXPECT_EQ(j["total"].get<double>(),
              combined_loss(j["cl"], j["mki"], j["ce"], cfg.loss()));
    EXPECT_TRUE(j.contains("grad"));
    EXPECT_LE(j["fd_max_rel_error"]["cl"].get<double>(), 1e-5);
    EXPECT_LE(j["fd_max_rel_error"]["mki"].get<double>(), 1e-9);
  }
}

TEST(EvalLoss, ZeroWeightsPassCeThrough) {
  const auto cfg = toy_config("pipe-loss-zero",
                              {{"loss", {{"lambda_cl", 0.0}, {"lambda_mki", 0.0}}}});
  std::ostringstream diag;
  cmd_build_mki(cfg, diag);
  cmd_eval_loss(cfg, {}, diag);
  for (const auto& l : lines_of(cfg.out_dir / "losses.jsonl")) {
    const auto j = json::parse(l);
    EXPECT_EQ(j["total"].get<double>(), j["ce"].get<double>());
    EXPECT_FALSE(j.contains("grad"));
  }
}

TEST(EvalLoss, OrphanIdsAreListed) {
  const auto cfg = toy_config("pipe-orphans");
  std::ostringstream diag;
  cmd_build_mki(cfg, diag);
  auto lines = lines_of(kToy / "ce.jsonl");
  lines.pop_back();
  const auto dropped = json::parse(lines_of(kToy / "ce.jsonl").back())["id"].get<std::string>();
  testing::write_lines(cfg.out_dir / "ce_short.jsonl", lines);
  auto short_cfg = cfg;
  short_cfg.ce = cfg.out_dir / "ce_short.jsonl";
  try {
    cmd_eval_loss(short_cfg, {}, diag);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find(dropped), std::string::npos);
  }
}

TEST(Metrics, ReportsConceptF1AndTaxonomy) {
  const auto cfg = toy_config("pipe-metrics");
  std::ostringstream diag;
  EXPECT_EQ(cmd_metrics(cfg, diag).exit_code, 0) << diag.str();
  const auto report = json::parse(slurp(cfg.out_dir / "metrics.json"));
  EXPECT_EQ(report["concept_f1"]["instances"], 3);
  const double f1 = report["concept_f1"]["f1"];
  EXPECT_GE(f1, 0.0);
  EXPECT_LE(f1, 1.0);
  EXPECT_EQ(report["taxonomy"]["total"], 3);
}

TEST(ParallelFor, CoversEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 8, [&](std::size_t i) { ++hits[i]; });
  for (int h : hits) EXPECT_EQ(h, 1);
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

#ifdef MEDFAITH_CLI
int run_cli(const std::string& args) {
  const std::string cmd = std::string(MEDFAITH_CLI) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
  const auto out = testing::scratch_dir("cli-exit");
  const auto config = (kToy / "run_hqs.json").string();
  EXPECT_EQ(run_cli("build-sets --config " + config + " --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "bundles.jsonl"));
  EXPECT_EQ(run_cli("build-sets --config " + config + " --profile mds --out " + out.string()), 2);
  EXPECT_EQ(run_cli("build-sets --config /nonexistent.json"), 2);
  EXPECT_EQ(run_cli("no-such-command"), 2);
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli("build-mki --config " + config + " --out " + out.string()), 0);
  EXPECT_EQ(run_cli("eval-loss --config " + config + " --out " + out.string() + " --grad"), 0);
  EXPECT_EQ(run_cli("metrics --config " + config + " --out " + out.string()), 0);
}

TEST(Cli, SeedFlagChangesOutput) {
  const auto a = testing::scratch_dir("cli-seed-a");
  const auto b = testing::scratch_dir("cli-seed-b");
  const auto config = (kToy / "run_hqs.json").string();
  run_cli("build-sets --config " + config + " --out " + a.string() + " --seed 1");
  run_cli("build-sets --config " + config + " --out " + b.string() + " --seed 2");
  EXPECT_NE(slurp(a / "bundles.jsonl"), slurp(b / "bundles.jsonl"));
}
#endif

}  // namespace
}  // namespace medfaith
