#include "putforge/dsl.hpp"

#include <cctype>
#include <charconv>
#include <memory>

namespace putforge::dsl {

ParseError::ParseError(int line, int column, const std::string& message)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line_(line), column_(column) {}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  // A NEXT placeholder is a null child pointer; flatten() turns it into Next.
  void parse_sequence(SequenceSpec& flat_out) {
    skip_ws();
    if (at_end()) fail("empty input, expected a transformation");
    while (true) {
      skip_ws();
      if (at_end()) break;
      roots_.push_back(parse_application());
    }
    // Concatenate the top-level applications: each one's NEXT hole (if any) is
    // filled by the following top-level application.
    std::vector<Violation> violations;
    for (auto& root : roots_) {
      auto part = flatten(*root, violations);
      flat_out.items.insert(flat_out.items.end(), part.items.begin(), part.items.end());
    }
    if (!violations.empty()) throw ValidationError(violations);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::vector<std::shared_ptr<NestedTransformation>> roots_;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(line_, col_, message); }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  bool try_word(std::string_view word) {
    if (text_.substr(pos_, word.size()) != word) return false;
    const std::size_t after = pos_ + word.size();
    if (after < text_.size()) {
      const char c = text_[after];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') return false;
    }
    for (std::size_t i = 0; i < word.size(); ++i) advance();
    return true;
  }

  std::string identifier() {
    std::string out;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
      out += peek();
      advance();
    }
    return out;
  }

  std::int64_t integer() {
    skip_ws();
    std::size_t start = pos_;
    std::size_t end = pos_;
    if (end < text_.size() && text_[end] == '-') ++end;
    while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    if (end == start || (end == start + 1 && text_[start] == '-')) fail("expected an integer");
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + end, value);
    if (ec != std::errc{} || ptr != text_.data() + end) fail("integer literal out of 64-bit range");
    while (pos_ < end) advance();
    return value;
  }

  int argv_index() {
    // after "argv"
    expect('[');
    const auto v = integer();
    if (v < 1 || v > 1000000) fail("argv index must be in [1, 1000000]");
    expect(']');
    return static_cast<int>(v);
  }

  std::string string_literal() {
    advance();  // opening quote
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string literal");
      char c = peek();
      if (c == '"') {
        advance();
        return out;
      }
      if (c == '\\') {
        advance();
        if (at_end()) fail("unterminated string literal");
        c = peek();
        if (c != '"' && c != '\\') fail("unsupported escape in string literal");
      }
      out += c;
      advance();
    }
  }

  std::string raw_snippet() {
    advance();  // '{'
    int depth = 1;
    std::string raw;
    char quote = 0;
    while (true) {
      if (at_end()) fail("unterminated '{' snippet");
      const char c = peek();
      if (quote) {
        raw += c;
        if (c == '\\') {
          advance();
          if (at_end()) fail("unterminated literal in snippet");
          raw += peek();
        } else if (c == quote) {
          quote = 0;
        }
        advance();
        continue;
      }
      if (c == '"' || c == '\'') quote = c;
      if (c == '{') ++depth;
      if (c == '}' && --depth == 0) {
        advance();
        break;
      }
      raw += c;
      advance();
    }
    return normalize_snippet(raw);
  }

  using Arg = std::variant<Param, NestedHole>;

  Arg parse_arg() {
    skip_ws();
    if (at_end()) fail("unexpected end of input in argument list");
    const char c = peek();
    if (c == '?') {
      advance();
      return Param{Fresh{}};
    }
    if (c == '"') return Param{StringLiteral{string_literal()}};
    if (c == '\'') {
      advance();
      if (at_end()) fail("unterminated char literal");
      const char v = peek();
      advance();
      if (peek() != '\'') fail("char literal must hold exactly one character");
      advance();
      return Param{CharLiteral{v}};
    }
    if (c == '{') return NestedHole{Snippet{raw_snippet()}};
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) return Param{IntLiteral{integer()}};
    if (try_word("argv")) return Param{ArgvString{argv_index()}};
    if (try_word("atoll")) {
      expect('(');
      skip_ws();
      if (!try_word("argv")) fail("expected argv inside atoll(...)");
      const int idx = argv_index();
      expect(')');
      return Param{ArgvInt{idx}};
    }
    if (try_word("NEXT")) return NestedHole{std::shared_ptr<NestedTransformation>{}};
    if (try_word("FAIL_OOB")) return NestedHole{Fail{BugKind::OutOfBounds}};
    if (try_word("FAIL")) return NestedHole{Fail{BugKind::Assert}};
    if (try_word("SKIP")) return NestedHole{Skip{}};
    if (std::isalpha(static_cast<unsigned char>(c))) return NestedHole{parse_application()};
    fail(std::string("unexpected character '") + c + "'");
  }

  std::shared_ptr<NestedTransformation> parse_application() {
    skip_ws();
    const int line = line_, col = col_;
    const std::string name = identifier();
    if (name.empty()) fail("expected a transformation kind");
    const auto kind = kind_from_name(name);
    if (!kind) throw ParseError(line, col, "unknown transformation kind '" + name + "'");
    auto node = std::make_shared<NestedTransformation>();
    node->kind = *kind;
    expect('(');
    bool in_holes = false;
    while (true) {
      auto arg = parse_arg();
      if (auto* p = std::get_if<Param>(&arg)) {
        if (in_holes) fail("parameter after hole argument");
        node->params.push_back(std::move(*p));
      } else {
        in_holes = true;
        node->holes.push_back(std::move(std::get<NestedHole>(arg)));
      }
      skip_ws();
      if (peek() == ',') {
        advance();
        continue;
      }
      if (peek() == ')') {
        advance();
        break;
      }
      fail("expected ',' or ')'");
    }
    return node;
  }

 public:
  static std::string normalize_snippet(std::string_view raw) {
    std::string out;
    char quote = 0;
    bool pending_space = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const char c = raw[i];
      if (quote) {
        out += c;
        if (c == '\\' && i + 1 < raw.size()) {
          out += raw[++i];
        } else if (c == quote) {
          quote = 0;
        }
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        pending_space = !out.empty();
        continue;
      }
      if (pending_space) out += ' ';
      pending_space = false;
      if (c == '"' || c == '\'') quote = c;
      out += c;
    }
    return out;
  }
};

std::string escape_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string print_hole(const HoleFiller& h) {
  struct V {
    std::string operator()(const Snippet& s) const { return s.text.empty() ? "{ }" : "{ " + s.text + " }"; }
    std::string operator()(const Next&) const { return "NEXT"; }
    std::string operator()(const Fail& f) const { return f.bug == BugKind::Assert ? "FAIL" : "FAIL_OOB"; }
    std::string operator()(const Skip&) const { return "SKIP"; }
  };
  return std::visit(V{}, h);
}

}  // namespace

std::string print_param(const Param& p) {
  struct V {
    std::string operator()(const IntLiteral& v) const { return std::to_string(v.value); }
    std::string operator()(const StringLiteral& v) const { return escape_string(v.value); }
    std::string operator()(const CharLiteral& v) const { return std::string("'") + v.value + "'"; }
    std::string operator()(const ArgvString& v) const { return "argv[" + std::to_string(v.index) + "]"; }
    std::string operator()(const ArgvInt& v) const { return "atoll(argv[" + std::to_string(v.index) + "])"; }
    std::string operator()(const Fresh&) const { return "?"; }
  };
  return std::visit(V{}, p);
}

SequenceSpec parse(std::string_view text) {
  Parser parser(text);
  SequenceSpec seq;
  parser.parse_sequence(seq);
  auto violations = validate(seq);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return seq;
}

std::string print(const SequenceSpec& seq) {
  auto violations = validate(seq);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  std::string out;
  for (const auto& item : seq.items) {
    if (!out.empty()) out += ' ';
    out += kind_name(item.kind);
    out += '(';
    bool first = true;
    for (const auto& p : item.params) {
      if (!first) out += ", ";
      first = false;
      out += print_param(p);
    }
    for (const auto& h : item.holes) {
      if (!first) out += ", ";
      first = false;
      out += print_hole(h);
    }
    out += ')';
  }
  return out;
}

namespace {

// Cuts a line at the first '#' outside string/char literals and snippets'
// literals.
std::string_view strip_comment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == '\\') ++i;
      else if (c == quote) quote = 0;
      continue;
    }
    if (c == '"' || c == '\'') quote = c;
    else if (c == '#') return line.substr(0, i);
  }
  return line;
}

bool blank(std::string_view s) {
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::vector<SpecLine> parse_file(std::string_view text) {
  std::vector<SpecLine> out;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    auto line = strip_comment(text.substr(start, end - start));
    if (!blank(line)) {
      SpecLine entry;
      entry.line = line_no;
      try {
        entry.spec = parse(line);
      } catch (const ParseError& e) {
        entry.error = std::to_string(line_no) + ":" + std::to_string(e.column()) + ": " +
                      std::string(e.what()).substr(std::string(e.what()).find(": ") + 2);
      } catch (const Error& e) {
        entry.error = std::to_string(line_no) + ": " + e.what();
      }
      out.push_back(std::move(entry));
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

}  // namespace putforge::dsl
