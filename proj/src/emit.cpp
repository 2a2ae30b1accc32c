#include "putforge/emit.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

namespace putforge {

namespace {

constexpr int kMaxIndentLevels = 32;

class Writer {
 public:
  void line(int depth, const std::string& text) {
    lines_.push_back(std::string(static_cast<std::size_t>(std::min(depth, kMaxIndentLevels)) * 2, ' ') + text);
  }
  int current_line() const { return static_cast<int>(lines_.size()); }
  std::string str() const {
    std::string out;
    for (const auto& l : lines_) {
      out += l;
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<std::string> lines_;
};

std::string int_operand(const Param& p) {
  if (const auto* a = std::get_if<ArgvInt>(&p)) return "atoll(argv[" + std::to_string(a->index) + "])";
  if (const auto* v = std::get_if<IntLiteral>(&p)) return c_int_literal(v->value);
  throw Error("emit: expected an int-like parameter");
}

std::string string_operand(const Param& p) {
  if (const auto* a = std::get_if<ArgvString>(&p)) return "argv[" + std::to_string(a->index) + "]";
  if (const auto* v = std::get_if<StringLiteral>(&p)) return c_string_literal(v->value);
  throw Error("emit: expected a string parameter");
}

std::string char_operand(const Param& p) {
  if (const auto* v = std::get_if<CharLiteral>(&p)) return std::string("'") + v->value + "'";
  throw Error("emit: expected a char parameter");
}

class Emitter {
 public:
  Emitter(const InstantiatedSequence& seq, const EmitOptions& opts) : seq_(seq), opts_(opts) {}

  EmittedSource run() {
    const bool has_loop = std::any_of(seq_.items.begin(), seq_.items.end(),
                                      [](const TransformationSpec& t) { return t.kind == Kind::FL; });
    out_.line(0, "#include <stdio.h>");
    out_.line(0, "#include <stdlib.h>");
    out_.line(0, "#include <string.h>");
    out_.line(0, "#include <assert.h>");
    out_.line(0, "");
    if (has_loop) {
      std::string def = do_something_definition();
      std::size_t start = 0;
      while (true) {
        const auto end = def.find('\n', start);
        out_.line(0, def.substr(start, end == std::string::npos ? std::string::npos : end - start));
        if (end == std::string::npos) break;
        start = end + 1;
      }
      out_.line(0, "");
    }
    out_.line(0, "int main(int argc, char** argv) {");
    out_.line(1, "if (argc < " + std::to_string(seq_.argv_arity + 1) + ") return 0;");
    item(0, 1);
    out_.line(1, "return 0;");
    out_.line(0, "}");
    return {out_.str(), bug_line_, bug_kind_};
  }

 private:
  const InstantiatedSequence& seq_;
  const EmitOptions& opts_;
  Writer out_;
  int bug_line_ = 0;
  BugKind bug_kind_ = BugKind::Assert;

  void hole(std::size_t k, const HoleFiller& h, int depth) {
    const std::string sfx = "_" + std::to_string(seq_.name_suffixes[k]);
    if (std::holds_alternative<Next>(h)) {
      item(k + 1, depth);
    } else if (const auto* f = std::get_if<Fail>(&h)) {
      bug_kind_ = opts_.bug_override.value_or(f->bug);
      bug_line_ = out_.current_line() + 1;
      if (bug_kind_ == BugKind::Assert)
        out_.line(depth, "assert(0 == 1);");
      else
        out_.line(depth, "volatile int oob" + sfx + " = 4; volatile int a" + sfx + "[3] = {0, 0, 0}; a" + sfx +
                             "[oob" + sfx + "] = a" + sfx + "[0];");
    } else if (const auto* s = std::get_if<Snippet>(&h)) {
      out_.line(depth, s->text.empty() ? ";" : s->text);
    } else {
      out_.line(depth, ";");
    }
  }

  void branches(std::size_t k, const std::string& condition, int depth) {
    const auto& t = seq_.items[k];
    out_.line(depth, "if (" + condition + ") {");
    hole(k, t.holes[0], depth + 1);
    out_.line(depth, "} else {");
    hole(k, t.holes[1], depth + 1);
    out_.line(depth, "}");
  }

  void body(std::size_t k, int depth) {
    out_.line(depth, "{");
    hole(k, seq_.items[k].holes[0], depth + 1);
    out_.line(depth, "}");
  }

  void item(std::size_t k, int depth) {
    if (k >= seq_.items.size()) throw Error("emit: NEXT past the last item");
    const auto& t = seq_.items[k];
    const std::string sfx = "_" + std::to_string(seq_.name_suffixes[k]);
    switch (t.kind) {
      case Kind::IC:
        branches(k, int_operand(t.params[0]) + " == " + int_operand(t.params[1]), depth);
        break;
      case Kind::SC:
        branches(k, "strcmp(" + string_operand(t.params[0]) + ", " + string_operand(t.params[1]) + ") == 0", depth);
        break;
      case Kind::FL: {
        const std::string j = "j" + sfx;
        out_.line(depth, "for (long long " + j + " = 0; " + j + " < " + int_operand(t.params[0]) + "; " + j +
                             "++) { do_something(); }");
        body(k, depth);
        break;
      }
      case Kind::PC: {
        const std::string s = string_operand(t.params[0]);
        const std::string n = int_operand(t.params[1]);
        if (std::get<IntLiteral>(t.params[1]).value < 1) throw Error("emit: PC requires n >= 1");
        const std::string l = "l" + sfx, h = "h" + sfx;
        out_.line(depth, "if (strlen(" + s + ") < " + n + ") exit(0);");
        out_.line(depth, "long long " + l + " = 0, " + h + " = (long long)strlen(" + s + ") - 1;");
        out_.line(depth, "while (" + h + " >= " + l + ") { if (" + s + "[" + h + "] != " + s + "[" + l +
                             "]) exit(0); " + h + "--; " + l + "++; }");
        body(k, depth);
        break;
      }
      case Kind::CC: {
        const std::string s = string_operand(t.params[0]);
        const std::string count = "count" + sfx, idx = "k" + sfx;
        out_.line(depth, "int " + count + " = 0;");
        out_.line(depth, "for (size_t " + idx + " = 0; " + idx + " < strlen(" + s + "); " + idx + "++) { if (" + s +
                             "[" + idx + "] == " + char_operand(t.params[1]) + ") " + count + "++; }");
        branches(k, count + " == " + int_operand(t.params[2]), depth);
        break;
      }
    }
  }
};

}  // namespace

std::string c_int_literal(std::int64_t value) {
  if (value == std::numeric_limits<std::int64_t>::min()) return "(-9223372036854775807LL - 1)";
  if (value > std::numeric_limits<std::int32_t>::max() || value <= std::numeric_limits<std::int32_t>::min())
    return std::to_string(value) + "LL";
  return std::to_string(value);
}

std::string c_string_literal(const std::string& value) {
  std::string out = "\"";
  for (char c : value) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '?') {
      out += "\\?";
    } else {
      out += c;
    }
  }
  return out + "\"";
}

std::string do_something_definition() {
  return "static volatile long long do_something_counter;\n"
         "\n"
         "static void do_something(void) {\n"
         "  do_something_counter++;\n"
         "}";
}

EmittedSource emit(const InstantiatedSequence& seq, const EmitOptions& opts) {
  if (seq.items.empty()) throw Error("emit: empty sequence");
  if (seq.name_suffixes.size() != seq.items.size()) throw Error("emit: name suffixes do not match items");
  for (const auto& t : seq.items)
    for (const auto& p : t.params)
      if (std::holds_alternative<Fresh>(p)) throw Error("emit: sequence is not fully instantiated");
  if (auto v = validate(SequenceSpec{seq.items}); !v.empty()) throw ValidationError(std::move(v));
  return Emitter(seq, opts).run();
}

}  // namespace putforge
