#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "medfaith/language.hpp"

namespace medfaith {

/// Source of paraphrases for positive-set augmentation.
class Paraphraser {
 public:
  virtual ~Paraphraser() = default;

  /// Returns a non-empty paraphrase for non-empty input.
  virtual std::string paraphrase(std::string_view text,
                                 Language language) const = 0;

  /// Recorded on every summary this provider produced.
  virtual std::string name() const = 0;
};

/// Offline stand-in: returns the input unchanged.
class StubParaphraser final : public Paraphraser {
 public:
  std::string paraphrase(std::string_view text, Language) const override {
    return std::string(text);
  }
  std::string name() const override { return "stub"; }
};

/// Runs a shell command per call with the text on stdin and reads the
/// paraphrase from stdout. The language name is exported as
/// MEDFAITH_LANGUAGE. Throws Error when the command fails or prints nothing.
class CommandParaphraser final : public Paraphraser {
 public:
  explicit CommandParaphraser(std::string command);

  std::string paraphrase(std::string_view text,
                         Language language) const override;
  std::string name() const override { return "command:" + command_; }

 private:
  std::string command_;
};

}  // namespace medfaith
