#include "medfaith/run_config.hpp"

#include <set>

#include "json_util.hpp"
#include "medfaith/error.hpp"

namespace medfaith {

using detail::json;

LossConfig default_loss_for(std::string_view profile_name) {
  // weights tuned per dataset; tau is not reported and stays at 1
  if (profile_name == "rrs") return {1.0, 2.0, 0.0014};
  return {1.0, 1.0, 0.001};
}

RuleProfile RunConfig::profile() const {
  RuleProfile p;
  if (custom_profile) {
    p = *custom_profile;
  } else if (auto builtin = RuleProfile::builtin(profile_name)) {
    p = std::move(*builtin);
  } else {
    throw ConfigError("unknown profile \"" + profile_name +
                      "\" (expected hqs, rrs, mds, all_ref_positive or an inline object)");
  }
  p.seed = seed;
  p.validate();
  return p;
}

LossConfig RunConfig::loss() const {
  auto cfg = default_loss_for(custom_profile ? std::string_view("custom")
                                             : std::string_view(profile_name));
  if (loss_override.tau) cfg.tau = *loss_override.tau;
  if (loss_override.lambda_cl) cfg.lambda_cl = *loss_override.lambda_cl;
  if (loss_override.lambda_mki) cfg.lambda_mki = *loss_override.lambda_mki;
  cfg.validate();
  return cfg;
}

UnigramConfig RunConfig::unigrams_for(Language lang) const {
  auto cfg = unigrams ? *unigrams : UnigramConfig::defaults(lang);
  cfg.validate();
  return cfg;
}

namespace {

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed,
                    std::string_view where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key \"" + key + "\" in " + std::string(where));
    }
  }
}

std::vector<std::string> string_list(const json& j, const char* key) {
  const auto& v = detail::require(j, key);
  if (!v.is_array()) throw ConfigError(std::string("\"") + key + "\" must be an array");
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string()) {
      throw ConfigError(std::string("\"") + key + "\" must hold strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

RuleProfile parse_profile_object(const json& j) {
  reject_unknown(j,
                 {"name", "positive_rules", "negative_rules", "min_positives",
                  "run_all_extractions", "all_references_positive",
                  "replace_multiplicity"},
                 "profile");
  RuleProfile p;
  p.name = j.value("name", std::string("custom"));
  for (const auto& name : string_list(j, "positive_rules")) {
    const auto rule = parse_positive_rule(name);
    if (!rule) throw ConfigError("unknown positive rule \"" + name + "\"");
    p.positive_rules.push_back(*rule);
  }
  if (j.contains("negative_rules")) {
    for (const auto& name : string_list(j, "negative_rules")) {
      const auto rule = parse_negative_rule(name);
      if (!rule) throw ConfigError("unknown negative rule \"" + name + "\"");
      p.negative_rules.push_back(*rule);
    }
  }
  p.min_positives = j.value("min_positives", std::size_t{2});
  p.run_all_extractions = j.value("run_all_extractions", false);
  p.all_references_positive = j.value("all_references_positive", false);
  p.replace_multiplicity = j.value("replace_multiplicity", std::size_t{1});
  return p;
}

UnigramConfig parse_unigrams(const json& j) {
  reject_unknown(j, {"negative_unigrams", "inversion_pair"}, "unigrams");
  UnigramConfig cfg;
  cfg.negative_unigrams = string_list(j, "negative_unigrams");
  if (j.contains("inversion_pair") && !j.at("inversion_pair").is_null()) {
    const auto& pair = j.at("inversion_pair");
    cfg.inversion_pair = InversionPair{detail::require_string(pair, "positive"),
                                       detail::require_string(pair, "negative")};
  }
  return cfg;
}

fs::path resolve(const fs::path& base, const json& j, const char* key) {
  if (!j.contains(key)) return {};
  fs::path p = j.at(key).get<std::string>();
  if (p.is_relative() && !base.empty()) p = base / p;
  return p;
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed run config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("run config must be a JSON object");

  try {
    reject_unknown(j,
                   {"corpus", "lexicon", "vocab", "language", "profile", "unigrams",
                    "loss", "paraphraser", "out", "seed", "representations", "logits",
                    "ce", "mki", "predictions", "annotations", "total_instances",
                    "multi_label"},
                   "run config");
    RunConfig cfg;
    cfg.corpus = resolve(base_dir, j, "corpus");
    cfg.lexicon = resolve(base_dir, j, "lexicon");
    cfg.vocab = resolve(base_dir, j, "vocab");
    cfg.representations = resolve(base_dir, j, "representations");
    cfg.logits = resolve(base_dir, j, "logits");
    cfg.ce = resolve(base_dir, j, "ce");
    cfg.mki = resolve(base_dir, j, "mki");
    cfg.predictions = resolve(base_dir, j, "predictions");
    cfg.annotations = resolve(base_dir, j, "annotations");
    if (j.contains("out")) cfg.out_dir = resolve(base_dir, j, "out");

    if (j.contains("language")) {
      const auto name = j.at("language").get<std::string>();
      cfg.language = parse_language(name);
      if (!cfg.language) throw ConfigError("unknown language \"" + name + "\"");
    }
    if (j.contains("profile")) {
      const auto& p = j.at("profile");
      if (p.is_string()) {
        cfg.profile_name = p.get<std::string>();
      } else if (p.is_object()) {
        cfg.custom_profile = parse_profile_object(p);
        cfg.profile_name = cfg.custom_profile->name;
      } else {
        throw ConfigError("\"profile\" must be a name or an object");
      }
    }
    if (j.contains("unigrams")) cfg.unigrams = parse_unigrams(j.at("unigrams"));
    if (j.contains("loss")) {
      const auto& l = j.at("loss");
      reject_unknown(l, {"tau", "lambda_cl", "lambda_mki"}, "loss");
      if (l.contains("tau")) cfg.loss_override.tau = l.at("tau").get<double>();
      if (l.contains("lambda_cl")) cfg.loss_override.lambda_cl = l.at("lambda_cl").get<double>();
      if (l.contains("lambda_mki")) cfg.loss_override.lambda_mki = l.at("lambda_mki").get<double>();
    }
    if (j.contains("paraphraser")) {
      const auto& p = j.at("paraphraser");
      reject_unknown(p, {"kind", "command"}, "paraphraser");
      cfg.paraphraser.kind = p.value("kind", std::string("stub"));
      cfg.paraphraser.command = p.value("command", std::string());
      if (cfg.paraphraser.kind != "stub" && cfg.paraphraser.kind != "command") {
        throw ConfigError("paraphraser kind must be stub or command");
      }
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("total_instances")) {
      cfg.total_instances = j.at("total_instances").get<std::size_t>();
    }
    cfg.multi_label = j.value("multi_label", false);
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid run config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid run config: ") + e.what());
  }
}

RunConfig load_run_config(const fs::path& path) {
  return parse_run_config(detail::read_file(path), path.parent_path());
}

}  // namespace medfaith
