#pragma once

// Helpers shared by the unit tests and the acceptance runner.

#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace testsupport {

// McCabe complexity of `main` in an emitted PUT, counted from the text alone:
// 1 + decision keywords + short-circuit operators. Comments and string or
// char literals are skipped. Independent of putforge's own formula.
inline int count_main_complexity(std::string_view src) {
  const auto start = src.find("int main(");
  if (start == std::string_view::npos) return -1;
  std::string code;
  for (std::size_t i = start; i < src.size(); ++i) {
    const char c = src[i];
    if (c == '"' || c == '\'') {
      const char q = c;
      for (++i; i < src.size() && src[i] != q; ++i)
        if (src[i] == '\\') ++i;
      code += ' ';
      continue;
    }
    code += c;
  }
  auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  int n = 1;
  for (std::string_view kw : {"if", "for", "while", "case"}) {
    for (auto pos = code.find(kw); pos != std::string::npos; pos = code.find(kw, pos + 1)) {
      const bool left = pos == 0 || !is_ident(code[pos - 1]);
      const bool right = pos + kw.size() >= code.size() || !is_ident(code[pos + kw.size()]);
      if (left && right) ++n;
    }
  }
  for (std::string_view op : {"&&", "||"})
    for (auto pos = code.find(op); pos != std::string::npos; pos = code.find(op, pos + 2)) ++n;
  return n;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    for (int attempt = 0; attempt < 100; ++attempt) {
      path_ = std::filesystem::temp_directory_path() / ("putforge-test-" + std::to_string(rd()));
      if (std::filesystem::create_directory(path_)) return;
    }
    throw std::runtime_error("cannot create temp dir");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Lines of `text`, without terminators.
inline std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    out.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

}  // namespace testsupport
