#include "medfaith/paraphraser.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <unistd.h>

#include "medfaith/error.hpp"
#include "medfaith/text.hpp"

namespace medfaith {

namespace {

class TempFile {
 public:
  explicit TempFile(std::string_view contents) {
    char pattern[] = "/tmp/medfaith-paraphrase-XXXXXX";
    const int fd = ::mkstemp(pattern);
    if (fd < 0) throw Error("cannot create temporary file");
    path_ = pattern;
    std::size_t written = 0;
    while (written < contents.size()) {
      const auto n = ::write(fd, contents.data() + written, contents.size() - written);
      if (n <= 0) {
        ::close(fd);
        throw Error("cannot write temporary file");
      }
      written += static_cast<std::size_t>(n);
    }
    ::close(fd);
  }
  ~TempFile() { ::unlink(path_.c_str()); }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace

CommandParaphraser::CommandParaphraser(std::string command)
    : command_(std::move(command)) {
  if (command_.empty()) throw ConfigError("paraphraser command must not be empty");
}

std::string CommandParaphraser::paraphrase(std::string_view input,
                                           Language language) const {
  if (input.empty()) return {};
  TempFile tmp(input);
  const std::string shell = "MEDFAITH_LANGUAGE=" + std::string(to_string(language)) +
                            " " + command_ + " < '" + tmp.path() + "'";
  FILE* pipe = ::popen(shell.c_str(), "r");
  if (pipe == nullptr) throw Error("cannot run paraphraser: " + command_);
  std::string output;
  std::array<char, 4096> buffer{};
  std::size_t n;
  while ((n = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    output.append(buffer.data(), n);
  }
  const int status = ::pclose(pipe);
  if (status != 0) throw Error("paraphraser exited with status " + std::to_string(status));
  auto trimmed = text::trim(output);
  if (trimmed.empty()) throw Error("paraphraser returned empty output");
  return std::string(trimmed);
}

}  // namespace medfaith
