#include "medfaith/error.hpp"

#include <utility>

namespace medfaith {

namespace {

std::string summarize(const std::string& path,
                      const std::vector<RecordDiagnostic>& diagnostics) {
  std::string out = path + ": " + std::to_string(diagnostics.size()) +
                    (diagnostics.size() == 1 ? " bad record" : " bad records");
  for (const auto& d : diagnostics) {
    out += "\n  ";
    if (d.line != 0) out += "line " + std::to_string(d.line) + ": ";
    if (!d.id.empty()) out += "[" + d.id + "] ";
    out += d.message;
  }
  return out;
}

}  // namespace

InputError::InputError(std::string path, std::vector<RecordDiagnostic> diagnostics)
    : Error(summarize(path, diagnostics)),
      path_(std::move(path)),
      diagnostics_(std::move(diagnostics)) {}

}  // namespace medfaith
