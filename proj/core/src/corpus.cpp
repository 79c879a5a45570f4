#include "medfaith/corpus.hpp"

#include <set>

#include "json_util.hpp"
#include "medfaith/error.hpp"
#include "medfaith/text.hpp"

namespace medfaith {

using detail::json;
using detail::ordered_json;

std::string_view to_string(SpeakerRole role) noexcept {
  switch (role) {
    case SpeakerRole::patient: return "patient";
    case SpeakerRole::doctor: return "doctor";
    case SpeakerRole::other: return "other";
  }
  return "other";
}

std::optional<SpeakerRole> parse_speaker_role(std::string_view name) noexcept {
  if (name == "patient") return SpeakerRole::patient;
  if (name == "doctor") return SpeakerRole::doctor;
  if (name == "other") return SpeakerRole::other;
  return std::nullopt;
}

std::string TrainingInstance::source_text() const {
  if (const auto* text = std::get_if<std::string>(&source)) return *text;
  std::string joined;
  for (const auto& u : dialogue()) {
    if (!joined.empty()) joined += '\n';
    joined += u.text;
  }
  return joined;
}

std::vector<std::string> TrainingInstance::source_sentences() const {
  if (const auto* text = std::get_if<std::string>(&source)) {
    return text::split_sentences(*text, language);
  }
  std::vector<std::string> out;
  for (const auto& u : dialogue()) {
    auto t = text::trim(u.text);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

namespace {

TrainingInstance from_json(const json& j) {
  if (!j.is_object()) throw Error("record is not a JSON object");
  TrainingInstance inst;
  inst.id = detail::require_string(j, "id");
  if (inst.id.empty()) throw Error("empty id");

  const bool has_text = j.contains("source");
  const bool has_dialogue = j.contains("utterances");
  if (has_text == has_dialogue) {
    throw Error("exactly one of \"source\" or \"utterances\" is required");
  }
  if (has_text) {
    inst.source = detail::require_string(j, "source");
  } else {
    const auto& arr = j.at("utterances");
    if (!arr.is_array()) throw Error("\"utterances\" must be an array");
    Dialogue dialogue;
    for (const auto& u : arr) {
      const auto role_name = detail::require_string(u, "role");
      const auto role = parse_speaker_role(role_name);
      if (!role) throw Error("unknown speaker role \"" + role_name + "\"");
      dialogue.push_back({*role, detail::require_string(u, "text")});
    }
    if (dialogue.empty()) throw Error("dialogue has no utterances");
    inst.source = std::move(dialogue);
  }

  inst.reference = detail::require_string(j, "reference");
  if (text::trim(inst.reference).empty()) throw Error("empty reference");

  const auto language_name = detail::require_string(j, "language");
  const auto language = parse_language(language_name);
  if (!language) throw Error("unknown language \"" + language_name + "\"");
  inst.language = *language;
  return inst;
}

std::string id_hint(const json& j) {
  if (j.is_object() && j.contains("id") && j.at("id").is_string()) {
    return j.at("id").get<std::string>();
  }
  return {};
}

}  // namespace

TrainingInstance parse_instance(std::string_view json_line) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::exception& e) {
    throw InputError("<record>", {{0, {}, std::string("malformed JSON: ") + e.what()}});
  }
  try {
    return from_json(j);
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError("<record>", {{0, id_hint(j), e.what()}});
  }
}

std::string serialize_instance(const TrainingInstance& instance) {
  ordered_json j;
  j["id"] = instance.id;
  if (const auto* text = std::get_if<std::string>(&instance.source)) {
    j["source"] = *text;
  } else {
    ordered_json arr = ordered_json::array();
    for (const auto& u : instance.dialogue()) {
      ordered_json item;
      item["role"] = to_string(u.role);
      item["text"] = u.text;
      arr.push_back(std::move(item));
    }
    j["utterances"] = std::move(arr);
  }
  j["reference"] = instance.reference;
  j["language"] = to_string(instance.language);
  return detail::dump(j);
}

std::vector<TrainingInstance> load_corpus(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error("corpus file not found: " + path.string());
  }
  std::vector<TrainingInstance> out;
  std::vector<RecordDiagnostic> problems;
  std::set<std::string, std::less<>> seen;
  for (const auto& line : detail::read_lines(path)) {
    json j;
    try {
      j = json::parse(line.text);
    } catch (const json::exception& e) {
      problems.push_back({line.number, {}, std::string("malformed JSON: ") + e.what()});
      continue;
    }
    try {
      auto inst = from_json(j);
      if (!seen.insert(inst.id).second) {
        problems.push_back({line.number, inst.id, "duplicate id"});
        continue;
      }
      out.push_back(std::move(inst));
    } catch (const std::exception& e) {
      problems.push_back({line.number, id_hint(j), e.what()});
    }
  }
  if (!problems.empty()) throw InputError(path.string(), std::move(problems));
  return out;
}

void write_corpus(const std::filesystem::path& path,
                  const std::vector<TrainingInstance>& instances) {
  std::string data;
  for (const auto& inst : instances) {
    data += serialize_instance(inst);
    data += '\n';
  }
  detail::write_file(path, data);
}

}  // namespace medfaith
