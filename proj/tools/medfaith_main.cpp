// medfaith: contrastive set construction, MKI vectors, loss evaluation and
// faithfulness metrics for medical summarization corpora.
//
//   medfaith build-sets --config run.json [--profile hqs] [--seed 7] [--out dir]
//   medfaith build-mki  --config run.json
//   medfaith eval-loss  --config run.json [--grad] [--check-fd]
//   medfaith metrics    --config run.json [--predictions p.jsonl]

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "medfaith/error.hpp"
#include "medfaith/pipeline.hpp"
#include "medfaith/run_config.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::string> profile;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "JSON run config")->required()->check(CLI::ExistingFile);
  cmd->add_option("--profile", flags.profile, "hqs | rrs | mds | all_ref_positive");
  cmd->add_option("--seed", flags.seed, "Base seed for all random choices");
  cmd->add_option("--out", flags.out, "Output directory");
}

medfaith::RunConfig resolve(const CommonFlags& flags) {
  auto config = medfaith::load_run_config(flags.config);
  if (flags.profile) {
    config.profile_name = *flags.profile;
    config.custom_profile.reset();
  }
  if (flags.seed) config.seed = *flags.seed;
  if (flags.out) config.out_dir = *flags.out;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Faithfulness toolkit for medical summarization corpora"};
  app.require_subcommand(1);

  CommonFlags flags;
  medfaith::EvalLossOptions loss_options;
  std::optional<std::string> representations, logits, ce, mki, predictions, annotations;

  auto* sets = app.add_subcommand("build-sets", "Build positive/negative summary sets");
  add_common(sets, flags);

  auto* build_mki = app.add_subcommand("build-mki", "Build sparse MKI frequency vectors");
  add_common(build_mki, flags);

  auto* eval = app.add_subcommand("eval-loss", "Evaluate CL, MKI and combined losses");
  add_common(eval, flags);
  eval->add_flag("--grad", loss_options.gradients, "Emit gradients");
  eval->add_flag("--check-fd", loss_options.check_fd, "Audit gradients by central differences");
  eval->add_option("--fd-step", loss_options.fd_step, "Finite-difference step")->check(CLI::PositiveNumber);
  eval->add_option("--representations", representations, "Representations JSONL");
  eval->add_option("--logits", logits, "Averaged logits JSONL");
  eval->add_option("--ce", ce, "Cross-entropy JSONL");
  eval->add_option("--mki", mki, "MKI vectors JSONL");

  auto* metrics = app.add_subcommand("metrics", "Concept F1 and error-taxonomy report");
  add_common(metrics, flags);
  metrics->add_option("--predictions", predictions, "Predictions JSONL");
  metrics->add_option("--annotations", annotations, "Error annotations JSONL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help and version requests exit 0; usage errors share the input-error code
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    auto config = resolve(flags);
    if (representations) config.representations = *representations;
    if (logits) config.logits = *logits;
    if (ce) config.ce = *ce;
    if (mki) config.mki = *mki;
    if (predictions) config.predictions = *predictions;
    if (annotations) config.annotations = *annotations;

    medfaith::CommandResult result;
    if (sets->parsed()) {
      result = medfaith::cmd_build_sets(config, std::cerr);
    } else if (build_mki->parsed()) {
      result = medfaith::cmd_build_mki(config, std::cerr);
    } else if (eval->parsed()) {
      result = medfaith::cmd_eval_loss(config, loss_options, std::cerr);
    } else {
      result = medfaith::cmd_metrics(config, std::cerr);
    }
    return result.exit_code;
  } catch (const medfaith::Error& e) {
    std::cerr << "medfaith: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "medfaith: unexpected failure: " << e.what() << '\n';
    return 2;
  }
}
