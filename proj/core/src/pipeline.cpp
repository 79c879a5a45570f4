#include "medfaith/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <numeric>
#include <ostream>
#include <thread>

#include "json_util.hpp"
#include "medfaith/contrastive.hpp"
#include "medfaith/corpus.hpp"
#include "medfaith/error.hpp"
#include "medfaith/lexicon.hpp"
#include "medfaith/loss.hpp"
#include "medfaith/metrics.hpp"
#include "medfaith/mki.hpp"

namespace medfaith {

using detail::json;
using detail::ordered_json;

std::size_t worker_count() {
  if (const char* env = std::getenv("MEDFAITH_WORKERS")) {
    char* end = nullptr;
    const auto n = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& task) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) task(i);
    });
  }
}

namespace {

struct Inputs {
  std::vector<TrainingInstance> corpus;
  Language language = Language::english;
};

Inputs load_inputs(const RunConfig& config) {
  if (config.corpus.empty()) throw ConfigError("run config has no corpus path");
  Inputs in;
  in.corpus = load_corpus(config.corpus);
  if (config.language) {
    in.language = *config.language;
  } else if (!in.corpus.empty()) {
    in.language = in.corpus.front().language;
  }
  return in;
}

MedicalLexicon require_lexicon(const RunConfig& config, Language language) {
  if (config.lexicon.empty()) throw ConfigError("run config has no lexicon path");
  return load_lexicon(config.lexicon, language);
}

/// Indices of `corpus` sorted by instance id.
std::vector<std::size_t> id_order(const std::vector<TrainingInstance>& corpus) {
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return corpus[a].id < corpus[b].id; });
  return order;
}

std::unique_ptr<Paraphraser> make_paraphraser(const ParaphraserSpec& spec) {
  if (spec.kind == "command") return std::make_unique<CommandParaphraser>(spec.command);
  return std::make_unique<StubParaphraser>();
}

void report_errors(std::ostream& diag, const std::vector<std::string>& errors) {
  for (const auto& e : errors) diag << "error: " << e << '\n';
}

std::string language_error(const TrainingInstance& inst, Language expected) {
  return "instance " + inst.id + ": language " + std::string(to_string(inst.language)) +
         " differs from the run language " + std::string(to_string(expected));
}

}  // namespace

// ---------------------------------------------------------------------------

CommandResult cmd_build_sets(const RunConfig& config, std::ostream& diag) {
  const auto in = load_inputs(config);
  const auto lexicon = require_lexicon(config, in.language);
  const auto unigrams = config.unigrams_for(in.language);
  const auto profile = config.profile();
  profile.validate_for(in.language, unigrams);
  const auto paraphraser = make_paraphraser(config.paraphraser);
  const BuildContext context{lexicon, unigrams, *paraphraser, {}};

  const auto n = in.corpus.size();
  std::vector<std::optional<BundleReport>> reports(n);
  std::vector<std::string> failures(n);
  parallel_for(n, worker_count(), [&](std::size_t i) {
    const auto& inst = in.corpus[i];
    if (inst.language != in.language) {
      failures[i] = language_error(inst, in.language);
      return;
    }
    try {
      reports[i] = build_contrastive_bundle(inst, profile, context);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });

  CommandResult result;
  std::string bundles;
  std::size_t passed = 0;
  std::map<std::string, std::size_t> skips;
  std::map<std::string, std::size_t> provenance_counts;
  for (auto rule : profile.negative_rules) skips[std::string(to_string(rule))] = 0;
  ordered_json failure_list = ordered_json::array();

  for (auto i : id_order(in.corpus)) {
    if (!reports[i]) {
      result.errors.push_back(failures[i]);
      ordered_json f;
      f["id"] = in.corpus[i].id;
      f["message"] = failures[i];
      failure_list.push_back(std::move(f));
      continue;
    }
    const auto& r = *reports[i];
    bundles += serialize_bundle(r.bundle);
    bundles += '\n';
    if (r.validation == Validation::positive) ++passed;
    for (auto rule : r.skipped) ++skips[std::string(to_string(rule))];
    for (const auto* set : {&r.bundle.positives, &r.bundle.negatives}) {
      for (const auto& s : *set) ++provenance_counts[std::string(to_string(s.provenance))];
    }
  }

  const std::size_t built = n - result.errors.size();
  ordered_json stats;
  stats["profile"] = profile.name;
  stats["seed"] = profile.seed;
  stats["instances"] = n;
  stats["bundles"] = built;
  stats["validation_passed"] = passed;
  stats["validation_pass_rate"] = built == 0 ? 0.0 : static_cast<double>(passed) / static_cast<double>(built);
  ordered_json skip_json = ordered_json::object();
  for (const auto& [rule, count] : skips) skip_json[rule] = count;
  stats["rule_skips"] = std::move(skip_json);
  ordered_json prov_json = ordered_json::object();
  for (const auto& [p, count] : provenance_counts) prov_json[p] = count;
  stats["provenance_counts"] = std::move(prov_json);
  stats["failures"] = std::move(failure_list);

  const auto bundle_path = config.out_dir / "bundles.jsonl";
  const auto stats_path = config.out_dir / "build_sets_stats.json";
  detail::write_file(bundle_path, bundles);
  detail::write_file(stats_path, stats.dump(2) + "\n");
  result.outputs = {bundle_path, stats_path};

  report_errors(diag, result.errors);
  diag << "build-sets: " << built << "/" << n << " bundles, profile " << profile.name
       << ", validation pass rate " << stats["validation_pass_rate"].get<double>() << '\n';
  result.exit_code = result.errors.empty() ? 0 : 1;
  return result;
}

// ---------------------------------------------------------------------------

CommandResult cmd_build_mki(const RunConfig& config, std::ostream& diag) {
  const auto in = load_inputs(config);
  const auto lexicon = require_lexicon(config, in.language);
  const auto unigrams = config.unigrams_for(in.language);
  if (config.vocab.empty()) throw ConfigError("run config has no vocab path");
  const auto vocab = load_vocabulary(config.vocab);

  const auto n = in.corpus.size();
  std::vector<std::string> lines(n), failures(n);
  parallel_for(n, worker_count(), [&](std::size_t i) {
    const auto& inst = in.corpus[i];
    if (inst.language != in.language) {
      failures[i] = language_error(inst, in.language);
      return;
    }
    lines[i] = serialize_mki(build_bm_vector(inst.reference, lexicon, unigrams, vocab, inst.id));
  });

  CommandResult result;
  std::string data;
  for (auto i : id_order(in.corpus)) {
    if (!failures[i].empty()) {
      result.errors.push_back(failures[i]);
      continue;
    }
    data += lines[i];
    data += '\n';
  }
  const auto path = config.out_dir / "mki.jsonl";
  detail::write_file(path, data);
  result.outputs = {path};
  report_errors(diag, result.errors);
  diag << "build-mki: " << n - result.errors.size() << " vectors over a vocabulary of "
       << vocab.size() << '\n';
  result.exit_code = result.errors.empty() ? 0 : 1;
  return result;
}

// ---------------------------------------------------------------------------

namespace {

struct Representations {
  std::vector<Vector> positives;
  std::vector<Vector> negatives;
};

std::vector<Vector> matrix(const json& j, const char* key) {
  std::vector<Vector> out;
  for (const auto& row : detail::require(j, key)) out.push_back(row.get<Vector>());
  return out;
}

/// Reads an id-keyed JSONL file; duplicate ids and bad lines are fatal.
template <typename T, typename Parse>
std::map<std::string, T> read_keyed(const fs::path& path, const char* id_key, Parse parse) {
  if (path.empty()) throw ConfigError(std::string("missing input path for ") + id_key);
  std::map<std::string, T> out;
  std::vector<RecordDiagnostic> problems;
  for (const auto& line : detail::read_lines(path)) {
    try {
      const auto j = json::parse(line.text);
      auto id = detail::require_string(j, id_key);
      auto value = parse(j, line.text);
      if (!out.emplace(id, std::move(value)).second) {
        problems.push_back({line.number, id, "duplicate id"});
      }
    } catch (const std::exception& e) {
      problems.push_back({line.number, {}, e.what()});
    }
  }
  if (!problems.empty()) throw InputError(path.string(), std::move(problems));
  return out;
}

ordered_json matrix_json(const std::vector<Vector>& rows) {
  ordered_json out = ordered_json::array();
  for (const auto& r : rows) out.push_back(r);
  return out;
}

}  // namespace

CommandResult cmd_eval_loss(const RunConfig& config, const EvalLossOptions& options,
                            std::ostream& diag) {
  const auto loss_config = config.loss();

  const auto reps = read_keyed<Representations>(
      config.representations, "id", [](const json& j, const std::string&) {
        return Representations{matrix(j, "positives"),
                               j.contains("negatives") ? matrix(j, "negatives")
                                                       : std::vector<Vector>{}};
      });
  const auto logits = read_keyed<Vector>(config.logits, "id", [](const json& j, const std::string&) {
    return detail::require(j, "logits").get<Vector>();
  });
  const auto ces = read_keyed<double>(config.ce, "id", [](const json& j, const std::string&) {
    return detail::require(j, "ce").get<double>();
  });
  const auto mki_path = config.mki.empty() ? config.out_dir / "mki.jsonl" : config.mki;
  const auto bms = read_keyed<MkiVector>(mki_path, "instance_id",
                                         [](const json&, const std::string& line) {
                                           return parse_mki(line);
                                         });

  std::set<std::string> ids;
  for (const auto* m : {&reps}) for (const auto& [id, v] : *m) ids.insert(id);
  for (const auto& [id, v] : logits) ids.insert(id);
  for (const auto& [id, v] : ces) ids.insert(id);
  for (const auto& [id, v] : bms) ids.insert(id);
  std::vector<std::string> orphans;
  for (const auto& id : ids) {
    if (!reps.count(id) || !logits.count(id) || !ces.count(id) || !bms.count(id)) {
      orphans.push_back(id);
    }
  }
  if (!orphans.empty()) {
    std::string list;
    for (const auto& id : orphans) list += (list.empty() ? "" : ", ") + id;
    throw InputError("eval-loss inputs",
                     {{0, {}, "ids not present in every input: " + list}});
  }

  const std::vector<std::string> order(ids.begin(), ids.end());
  std::vector<std::string> lines(order.size()), failures(order.size());
  parallel_for(order.size(), worker_count(), [&](std::size_t i) {
    const auto& id = order[i];
    try {
      const auto& r = reps.at(id);
      const auto& p = logits.at(id);
      const auto& bm = bms.at(id);
      const double ce = ces.at(id);
      const auto cl = contrastive_loss(r.positives, r.negatives, loss_config);
      const auto mki = mki_loss(bm, p);
      const double total = combined_loss(cl.loss, mki.loss, ce, loss_config);

      ordered_json j;
      j["id"] = id;
      j["cl"] = cl.loss;
      j["mki"] = mki.loss;
      j["ce"] = ce;
      j["total"] = total;
      if (options.gradients) {
        ordered_json g;
        g["positives"] = matrix_json(cl.positive_grads);
        g["negatives"] = matrix_json(cl.negative_grads);
        g["logits"] = mki.grad;
        j["grad"] = std::move(g);
      }
      if (options.check_fd) {
        const auto dim = r.positives.front().size();
        Vector flat;
        for (const auto* set : {&r.positives, &r.negatives}) {
          for (const auto& v : *set) flat.insert(flat.end(), v.begin(), v.end());
        }
        const auto cl_fn = contrastive_objective(r.positives.size(), r.negatives.size(),
                                                 dim, loss_config);
        const Objective mki_fn = [&bm](std::span<const double> x, Vector* grad) {
          auto res = mki_loss(bm, x);
          if (grad != nullptr) *grad = std::move(res.grad);
          return res.loss;
        };
        ordered_json fd;
        fd["cl"] = finite_difference_check(cl_fn, flat, options.fd_step);
        fd["mki"] = finite_difference_check(mki_fn, p, options.fd_step);
        j["fd_max_rel_error"] = std::move(fd);
      }
      lines[i] = detail::dump(j);
    } catch (const std::exception& e) {
      failures[i] = "instance " + id + ": " + e.what();
    }
  });

  CommandResult result;
  std::string data;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!failures[i].empty()) {
      result.errors.push_back(failures[i]);
      continue;
    }
    data += lines[i];
    data += '\n';
  }
  const auto path = config.out_dir / "losses.jsonl";
  detail::write_file(path, data);
  result.outputs = {path};
  report_errors(diag, result.errors);
  diag << "eval-loss: " << order.size() - result.errors.size() << " instances, tau "
       << loss_config.tau << ", lambda_cl " << loss_config.lambda_cl << ", lambda_mki "
       << loss_config.lambda_mki << '\n';
  result.exit_code = result.errors.empty() ? 0 : 1;
  return result;
}

// ---------------------------------------------------------------------------

CommandResult cmd_metrics(const RunConfig& config, std::ostream& diag) {
  if (config.predictions.empty() && config.annotations.empty()) {
    throw ConfigError("metrics needs a predictions and/or an annotations file");
  }
  std::optional<Inputs> in;
  if (!config.corpus.empty()) in = load_inputs(config);
  const Language language =
      config.language ? *config.language : (in ? in->language : Language::english);

  CommandResult result;
  ordered_json report;

  if (!config.predictions.empty()) {
    const auto lexicon = require_lexicon(config, language);
    std::map<std::string, std::string> references;
    if (in) {
      for (const auto& inst : in->corpus) references[inst.id] = inst.reference;
    }
    struct Pair {
      std::string prediction;
      std::string reference;
    };
    const auto pairs = read_keyed<Pair>(
        config.predictions, "id", [&](const json& j, const std::string&) {
          Pair p{detail::require_string(j, "prediction"), {}};
          if (j.contains("reference")) {
            p.reference = detail::require_string(j, "reference");
          } else {
            const auto id = detail::require_string(j, "id");
            const auto it = references.find(id);
            if (it == references.end()) {
              throw Error("no reference for prediction " + id);
            }
            p.reference = it->second;
          }
          return p;
        });

    double sum_p = 0, sum_r = 0, sum_f = 0;
    ordered_json per_instance = ordered_json::array();
    for (const auto& [id, pair] : pairs) {
      const auto r = concept_f1(pair.prediction, pair.reference, lexicon);
      sum_p += r.precision;
      sum_r += r.recall;
      sum_f += r.f1;
      ordered_json item;
      item["id"] = id;
      item["precision"] = r.precision;
      item["recall"] = r.recall;
      item["f1"] = r.f1;
      item["pred_concepts"] = r.pred_concepts;
      item["ref_concepts"] = r.ref_concepts;
      per_instance.push_back(std::move(item));
    }
    const double count = static_cast<double>(pairs.size());
    ordered_json summary;
    summary["instances"] = pairs.size();
    summary["precision"] = pairs.empty() ? 0.0 : sum_p / count;
    summary["recall"] = pairs.empty() ? 0.0 : sum_r / count;
    summary["f1"] = pairs.empty() ? 0.0 : sum_f / count;
    report["concept_f1"] = std::move(summary);
    report["per_instance"] = std::move(per_instance);
  }

  if (!config.annotations.empty()) {
    const auto annotations = load_annotations(config.annotations);
    TaxonomyOptions options;
    options.multi_label = config.multi_label;
    std::size_t total = 0;
    if (in) {
      std::set<std::string> ids;
      for (const auto& inst : in->corpus) ids.insert(inst.id);
      total = ids.size();
      options.known_ids = std::move(ids);
    }
    if (config.total_instances) total = *config.total_instances;
    if (!in && !config.total_instances) {
      std::set<std::string> ids;
      for (const auto& a : annotations) ids.insert(a.instance_id);
      total = ids.size();
    }
    const auto tax = aggregate_error_annotations(annotations, total, options);
    ordered_json t;
    t["total"] = tax.total;
    t["mode"] = options.multi_label ? "multi_label" : "single_label";
    ordered_json counts = ordered_json::object();
    ordered_json pct = ordered_json::object();
    for (const auto& [c, n] : tax.counts) counts[std::string(to_string(c))] = n;
    for (const auto& [c, v] : tax.percentages) pct[std::string(to_string(c))] = v;
    t["counts"] = std::move(counts);
    t["percentages"] = std::move(pct);
    t["erroneous"] = tax.erroneous;
    t["overall_error_percentage"] = tax.overall_error_percentage;
    t["needs_adjudication"] = tax.needs_adjudication;
    report["taxonomy"] = std::move(t);
  }

  const auto path = config.out_dir / "metrics.json";
  detail::write_file(path, report.dump(2) + "\n");
  result.outputs = {path};
  diag << "metrics: wrote " << path.string() << '\n';
  return result;
}

}  // namespace medfaith
