#pragma once

// Text formats: category specs, bracket words, functor object maps and
// integer matrices. Parsers never throw on bad input; they return positioned
// diagnostics instead.
//
// Spec grammar, one directive per line, `#` starts a comment:
//
//   object NAME
//   zero NAME
//   unit NAME
//   pushout APEX -> LEFT [mono], APEX -> RIGHT [mono] => RESULT
//   sum A + B = C
//   product A * B = C
//
// Either `[mono]` may be omitted; a square with neither is kept but warned
// about, and it contributes no relation.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "k0heap/category.hpp"
#include "k0heap/expr.hpp"
#include "k0heap/label.hpp"
#include "k0heap/lattice.hpp"

namespace k0 {

struct SpecSource {
  std::string text;
  std::string name = "<input>";
};

// 1-based line and column (columns count bytes).
struct Diagnostic {
  Severity severity;
  std::size_t line;
  std::size_t column;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

template <class T>
struct Parsed {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;

  bool ok() const noexcept { return value.has_value(); }
  std::size_t error_count() const {
    return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                                  [](const Diagnostic& d) { return d.severity == Severity::error; }));
  }
};

// "name:3:8: error: duplicate object 'A'" followed by the source line and a caret.
inline std::string format_diagnostic(const SpecSource& src, const Diagnostic& d) {
  std::ostringstream out;
  out << src.name << ':' << d.line << ':' << d.column << ": " << to_string(d.severity) << ": " << d.message << '\n';
  std::istringstream lines(src.text);
  std::string text;
  for (std::size_t i = 0; i < d.line && std::getline(lines, text); ++i) {
  }
  if (!text.empty() && text.back() == '\r') text.pop_back();
  out << "  " << text << '\n' << "  " << std::string(d.column > 0 ? d.column - 1 : 0, ' ') << "^\n";
  return out.str();
}

namespace detail {

struct Token {
  std::string text;
  std::size_t column;
};

struct Line {
  std::size_t number;
  std::size_t end_column;  // one past the last significant character
  std::vector<Token> tokens;
};

inline bool is_punct(char c) { return c == '[' || c == ']' || c == ','; }

// Splits on whitespace; `[`, `]` and `,` are always tokens of their own.
inline std::vector<Line> lex_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto stop = text.find('\n', start);
    if (stop == std::string_view::npos) stop = text.size();
    auto raw = text.substr(start, stop - start);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{number, 1, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      const char c = raw[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (is_punct(c)) {
        line.tokens.push_back({std::string(1, c), i + 1});
        ++i;
      } else {
        const auto begin = i;
        while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i])) && !is_punct(raw[i])) ++i;
        line.tokens.push_back({std::string(raw.substr(begin, i - begin)), begin + 1});
      }
    }
    if (!line.tokens.empty()) {
      line.end_column = line.tokens.back().column + line.tokens.back().text.size();
      out.push_back(std::move(line));
    }
    if (stop == text.size()) break;
    start = stop + 1;
  }
  return out;
}

// Cursor over one line's tokens that records the first problem it meets.
class LineCursor {
 public:
  LineCursor(const Line& line, std::vector<Diagnostic>& diags) : line_(line), diags_(diags) {}

  bool done() const { return pos_ >= line_.tokens.size(); }
  bool failed() const { return failed_; }
  const Token* peek() const { return done() ? nullptr : &line_.tokens[pos_]; }
  std::size_t column() const { return done() ? line_.end_column : line_.tokens[pos_].column; }

  void fail(std::string message) { fail_at(column(), std::move(message)); }
  void fail_at(std::size_t column, std::string message) {
    if (failed_) return;
    failed_ = true;
    diags_.push_back({Severity::error, line_.number, column, std::move(message)});
  }

  bool accept(std::string_view text) {
    if (failed_ || done() || line_.tokens[pos_].text != text) return false;
    ++pos_;
    return true;
  }

  bool expect(std::string_view text) {
    if (failed_) return false;
    if (accept(text)) return true;
    if (done()) {
      fail("expected '" + std::string(text) + "' before end of line");
    } else {
      fail("expected '" + std::string(text) + "', found '" + line_.tokens[pos_].text + "'");
    }
    return false;
  }

  std::optional<std::pair<GeneratorLabel, std::size_t>> label(const char* what) {
    if (failed_) return std::nullopt;
    if (done()) {
      fail(std::string("expected ") + what + " before end of line");
      return std::nullopt;
    }
    const auto& t = line_.tokens[pos_];
    if (!is_valid_label(t.text)) {
      fail("invalid label '" + t.text + "'");
      return std::nullopt;
    }
    ++pos_;
    return std::pair{GeneratorLabel(t.text), t.column};
  }

  void finish() {
    if (!failed_ && !done()) fail("unexpected token '" + line_.tokens[pos_].text + "'");
  }

 private:
  const Line& line_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
  bool failed_ = false;
};

struct LabelUse {
  GeneratorLabel label;
  std::size_t line;
  std::size_t column;
};

}  // namespace detail

inline Parsed<CategorySpec> parse_spec(const SpecSource& src) {
  Parsed<CategorySpec> out;
  auto& diags = out.diagnostics;
  CategorySpec spec;

  std::map<GeneratorLabel, std::pair<std::size_t, std::size_t>> declared;
  std::vector<detail::LabelUse> uses;
  std::optional<detail::LabelUse> zero_use;
  std::map<std::pair<GeneratorLabel, GeneratorLabel>, GeneratorLabel> sum_table, product_table;

  auto error_at = [&](std::size_t line, std::size_t column, std::string message) {
    diags.push_back({Severity::error, line, column, std::move(message)});
  };

  for (const auto& line : detail::lex_lines(src.text)) {
    detail::LineCursor cur(line, diags);
    const auto& head = line.tokens.front();
    const auto n = line.number;
    auto use = [&](const std::pair<GeneratorLabel, std::size_t>& l) { uses.push_back({l.first, n, l.second}); };

    if (cur.accept("object")) {
      auto name = cur.label("object name");
      cur.finish();
      if (cur.failed()) continue;
      if (auto [it, inserted] = declared.try_emplace(name->first, n, name->second); !inserted) {
        error_at(n, name->second,
                 "duplicate object '" + name->first.name() + "' (first declared on line " +
                     std::to_string(it->second.first) + ")");
        continue;
      }
      spec.objects.push_back(name->first);
    } else if (cur.accept("zero") || cur.accept("unit")) {
      const bool is_zero = head.text == "zero";
      auto name = cur.label(is_zero ? "zero object name" : "unit object name");
      cur.finish();
      if (cur.failed()) continue;
      auto& slot = is_zero ? spec.zero : spec.unit;
      if (slot) {
        error_at(n, head.column, "duplicate " + head.text + " declaration");
        continue;
      }
      slot = name->first;
      use(*name);
      if (is_zero) zero_use = detail::LabelUse{name->first, n, name->second};
    } else if (cur.accept("pushout")) {
      auto apex = cur.label("apex object");
      cur.expect("->");
      auto left = cur.label("left object");
      const bool left_mono = cur.accept("[") && cur.expect("mono") && cur.expect("]");
      cur.expect(",");
      const auto apex2_column = cur.column();
      auto apex2 = cur.label("apex object");
      if (apex && apex2 && apex->first != apex2->first) {
        cur.fail_at(apex2_column, "both legs must start at the same apex '" + apex->first.name() + "'");
      }
      cur.expect("->");
      auto right = cur.label("right object");
      const bool right_mono = cur.accept("[") && cur.expect("mono") && cur.expect("]");
      cur.expect("=>");
      auto result = cur.label("pushout object");
      cur.finish();
      if (cur.failed()) continue;
      for (const auto* l : {&*apex, &*left, &*apex2, &*right, &*result}) use(*l);
      if (!left_mono && !right_mono) {
        diags.push_back({Severity::warning, n, head.column, kMonoLegMessage});
      }
      spec.pushouts.push_back({apex->first, left->first, right->first, left_mono, right_mono, result->first});
    } else if (cur.accept("sum") || cur.accept("product")) {
      const bool is_sum = head.text == "sum";
      auto a = cur.label("left operand");
      cur.expect(is_sum ? "+" : "*");
      auto b = cur.label("right operand");
      cur.expect("=");
      auto c = cur.label("result object");
      cur.finish();
      if (cur.failed()) continue;
      for (const auto* l : {&*a, &*b, &*c}) use(*l);
      auto& table = is_sum ? sum_table : product_table;
      if (auto [it, inserted] = table.try_emplace({a->first, b->first}, c->first); !inserted && it->second != c->first) {
        error_at(n, a->second,
                 "conflicting " + head.text + " entry: " + a->first.name() + (is_sum ? " + " : " * ") +
                     b->first.name() + " is already " + it->second.name());
        continue;
      }
      (is_sum ? spec.sums : spec.products).push_back({a->first, b->first, c->first});
    } else {
      cur.fail("unknown directive '" + head.text + "'");
    }
  }

  for (const auto& u : uses) {
    if (!declared.contains(u.label)) error_at(u.line, u.column, "unknown object '" + u.label.name() + "'");
  }

  if (zero_use && declared.contains(zero_use->label) && !spec.sums.empty()) {
    const auto& z = zero_use->label;
    for (const auto& a : spec.objects) {
      auto l = sum_table.find({z, a});
      auto r = sum_table.find({a, z});
      if (l == sum_table.end() && r == sum_table.end()) {
        error_at(zero_use->line, zero_use->column, "sum table lacks " + z.name() + " + " + a.name() + " for the zero object");
      } else if ((l != sum_table.end() && l->second != a) || (r != sum_table.end() && r->second != a)) {
        error_at(zero_use->line, zero_use->column, "zero object is not neutral for '" + a.name() + "'");
      }
    }
  }

  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& x, const Diagnostic& y) {
    return std::tie(x.line, x.column) < std::tie(y.line, y.column);
  });
  if (out.error_count() > 0) return out;

  // The positioned checks above cover everything validate_spec reports.
  for (const auto& issue : validate_spec(spec).issues) {
    if (issue.severity == Severity::error) error_at(1, 1, issue.message);
  }
  if (out.error_count() == 0) out.value = std::move(spec);
  return out;
}

inline Parsed<CategorySpec> parse_spec(std::string text) { return parse_spec(SpecSource{std::move(text)}); }

inline constexpr std::string_view kSpecHeader = "# k0 category spec\n";

// Canonical text: objects in declaration order, then zero and unit, then
// each entry kind sorted by its line.
inline std::string print_spec(const CategorySpec& s) {
  std::string out(kSpecHeader);
  for (const auto& o : s.objects) out += "object " + o.name() + "\n";
  if (s.zero) out += "zero " + s.zero->name() + "\n";
  if (s.unit) out += "unit " + s.unit->name() + "\n";

  auto emit_sorted = [&](std::vector<std::string> lines) {
    std::sort(lines.begin(), lines.end());
    for (auto& l : lines) out += l + "\n";
  };
  std::vector<std::string> lines;
  for (const auto& p : s.pushouts) {
    lines.push_back("pushout " + p.apex.name() + " -> " + p.left.name() + (p.left_mono ? " [mono]" : "") + ", " +
                    p.apex.name() + " -> " + p.right.name() + (p.right_mono ? " [mono]" : "") + " => " +
                    p.result.name());
  }
  emit_sorted(std::move(lines));
  lines.clear();
  for (const auto& e : s.sums) lines.push_back("sum " + e.left.name() + " + " + e.right.name() + " = " + e.result.name());
  emit_sorted(std::move(lines));
  lines.clear();
  for (const auto& e : s.products)
    lines.push_back("product " + e.left.name() + " * " + e.right.name() + " = " + e.result.name());
  emit_sorted(std::move(lines));
  return out;
}

namespace detail {

class WordParser {
 public:
  explicit WordParser(std::string_view text, std::vector<Diagnostic>& diags) : text_(text), diags_(diags) {}

  std::optional<HeapExpr> run() {
    auto e = expr();
    if (!e) return std::nullopt;
    skip_space();
    if (pos_ < text_.size()) return fail("unexpected '" + std::string(1, text_[pos_]) + "' after word");
    return e;
  }

 private:
  std::optional<HeapExpr> fail(std::string message) { return fail_at(pos_ + 1, std::move(message)); }
  std::optional<HeapExpr> fail_at(std::size_t column, std::string message) {
    diags_.push_back({Severity::error, 1, column, std::move(message)});
    return std::nullopt;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::optional<HeapExpr> expr() {
    skip_space();
    if (pos_ >= text_.size()) return fail("expected a generator or '[' before end of word");
    if (text_[pos_] == '[') {
      const auto open = pos_ + 1;
      ++pos_;
      std::vector<HeapExpr> kids;
      for (;;) {
        auto e = expr();
        if (!e) return std::nullopt;
        kids.push_back(std::move(*e));
        skip_space();
        if (pos_ >= text_.size()) return fail_at(open, "unclosed '['");
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (text_[pos_] == ']') {
          ++pos_;
          break;
        }
        return fail("expected ',' or ']'");
      }
      if (kids.size() % 2 == 0) {
        return fail_at(open, "bracket has even arity " + std::to_string(kids.size()) + "; heap products take an odd number of arguments");
      }
      return HeapExpr::node(std::move(kids));
    }
    const auto begin = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && !is_punct(text_[pos_])) ++pos_;
    const auto word = text_.substr(begin, pos_ - begin);
    if (word.empty()) return fail("expected a generator or '['");
    if (!is_valid_label(word)) return fail_at(begin + 1, "invalid label '" + std::string(word) + "'");
    return HeapExpr::leaf(GeneratorLabel(std::string(word)));
  }

  std::string_view text_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// `x` or a nested bracket such as `[a,b,[c,d,e]]`; odd arity is enforced.
inline Parsed<HeapExpr> parse_word(std::string_view text) {
  Parsed<HeapExpr> out;
  out.value = detail::WordParser(text, out.diagnostics).run();
  return out;
}

// Object map for a functor, one `map SRC -> DST` per line.
inline Parsed<std::map<GeneratorLabel, GeneratorLabel>> parse_object_map(const SpecSource& src) {
  Parsed<std::map<GeneratorLabel, GeneratorLabel>> out;
  std::map<GeneratorLabel, GeneratorLabel> map;
  std::map<GeneratorLabel, std::size_t> first_line;
  for (const auto& line : detail::lex_lines(src.text)) {
    detail::LineCursor cur(line, out.diagnostics);
    if (!cur.accept("map")) {
      cur.fail("unknown directive '" + line.tokens.front().text + "'");
      continue;
    }
    auto from = cur.label("source object");
    cur.expect("->");
    auto to = cur.label("target object");
    cur.finish();
    if (cur.failed()) continue;
    if (auto [it, inserted] = first_line.try_emplace(from->first, line.number); !inserted) {
      out.diagnostics.push_back({Severity::error, line.number, from->second,
                                 "object '" + from->first.name() + "' already mapped on line " + std::to_string(it->second)});
      continue;
    }
    map.emplace(from->first, to->first);
  }
  if (out.error_count() == 0) out.value = std::move(map);
  return out;
}

// Whitespace-separated integers, one matrix row per non-blank line.
inline Parsed<IntMatrix> parse_matrix(std::string_view text) {
  Parsed<IntMatrix> out;
  std::vector<std::vector<Integer>> rows;
  for (const auto& line : detail::lex_lines(text)) {
    std::vector<Integer> row;
    bool bad = false;
    for (const auto& t : line.tokens) {
      std::string_view digits = t.text;
      if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
      if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        out.diagnostics.push_back({Severity::error, line.number, t.column, "not an integer: '" + t.text + "'"});
        bad = true;
        break;
      }
      row.emplace_back(t.text.front() == '+' ? t.text.substr(1) : t.text);
    }
    if (bad) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      out.diagnostics.push_back({Severity::error, line.number, 1,
                                 "row has " + std::to_string(row.size()) + " entries, expected " +
                                     std::to_string(rows.front().size())});
      continue;
    }
    rows.push_back(std::move(row));
  }
  if (out.error_count() == 0) out.value = IntMatrix::from_rows(rows);
  return out;
}

}  // namespace k0
