#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "medfaith/contrastive.hpp"
#include "medfaith/language.hpp"
#include "medfaith/loss.hpp"
#include "medfaith/term_tagger.hpp"

namespace medfaith {

namespace fs = std::filesystem;

/// Per-field loss settings from the config; unset fields fall back to the
/// profile's defaults.
struct LossOverride {
  std::optional<double> tau;
  std::optional<double> lambda_cl;
  std::optional<double> lambda_mki;
};

struct ParaphraserSpec {
  std::string kind = "stub";  // stub | command
  std::string command;
};

/// One frozen run description. Relative paths in the JSON file are resolved
/// against the file's directory.
struct RunConfig {
  fs::path corpus;
  fs::path lexicon;
  fs::path vocab;
  std::optional<Language> language;  // defaults to the corpus language

  std::string profile_name = "hqs";
  std::optional<RuleProfile> custom_profile;
  std::optional<UnigramConfig> unigrams;
  LossOverride loss_override;
  ParaphraserSpec paraphraser;

  fs::path out_dir = "out";
  std::uint64_t seed = 0;

  // eval-loss inputs; mki defaults to <out>/mki.jsonl
  fs::path representations;
  fs::path logits;
  fs::path ce;
  fs::path mki;

  // metrics inputs
  fs::path predictions;
  fs::path annotations;
  std::optional<std::size_t> total_instances;
  bool multi_label = false;

  /// Built-in or inline profile with the run seed applied.
  RuleProfile profile() const;
  /// Profile defaults overridden by the "loss" block.
  LossConfig loss() const;
  UnigramConfig unigrams_for(Language language) const;
};

/// Loss weights tuned for each built-in profile.
LossConfig default_loss_for(std::string_view profile_name);

RunConfig parse_run_config(std::string_view json_text,
                           const fs::path& base_dir = {});
RunConfig load_run_config(const fs::path& path);

}  // namespace medfaith
