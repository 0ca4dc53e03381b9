#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "k0heap/heap.hpp"
#include "k0heap/label.hpp"

namespace k0 {

// Unevaluated bracket expression: either a generator or [e1, ..., ek].
// Arity is not checked here; evaluators reject even-arity nodes.
class HeapExpr {
 public:
  static HeapExpr leaf(GeneratorLabel x) { return HeapExpr(std::move(x)); }
  static HeapExpr node(std::vector<HeapExpr> children) { return HeapExpr(std::move(children)); }
  static HeapExpr node(std::initializer_list<HeapExpr> children) { return HeapExpr(std::vector<HeapExpr>(children)); }

  bool is_leaf() const noexcept { return children_.empty(); }
  const GeneratorLabel& label() const {
    if (!is_leaf()) throw Error("bracket node has no label");
    return *label_;
  }
  const std::vector<HeapExpr>& children() const noexcept { return children_; }

  std::size_t leaf_count() const {
    if (is_leaf()) return 1;
    std::size_t n = 0;
    for (const auto& c : children_) n += c.leaf_count();
    return n;
  }

  friend bool operator==(const HeapExpr&, const HeapExpr&) = default;

 private:
  explicit HeapExpr(GeneratorLabel x) : label_(std::move(x)) {}
  explicit HeapExpr(std::vector<HeapExpr> children) : children_(std::move(children)) {
    if (children_.empty()) throw Error("empty bracket");
  }

  std::optional<GeneratorLabel> label_;
  std::vector<HeapExpr> children_;
};

inline std::string to_string(const HeapExpr& e) {
  if (e.is_leaf()) return e.label().name();
  std::string out = "[";
  for (std::size_t i = 0; i < e.children().size(); ++i) {
    if (i) out += ',';
    out += to_string(e.children()[i]);
  }
  return out + "]";
}

namespace detail {

inline void append_letters(const HeapExpr& e, bool inverted, std::vector<GeneratorLabel>& out) {
  if (e.is_leaf()) {
    out.push_back(e.label());
    return;
  }
  const auto& kids = e.children();
  if (kids.size() % 2 == 0) {
    throw Error("bracket " + to_string(e) + " has even arity " + std::to_string(kids.size()));
  }
  std::vector<GeneratorLabel> local;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    std::vector<GeneratorLabel> part;
    append_letters(kids[i], i % 2 == 1, part);
    local.insert(local.end(), part.begin(), part.end());
  }
  if (inverted) std::reverse(local.begin(), local.end());
  out.insert(out.end(), local.begin(), local.end());
}

}  // namespace detail

// The free heap word denoted by a bracket expression, before reduction.
inline FreeHeapWord flatten(const HeapExpr& e) {
  std::vector<GeneratorLabel> letters;
  detail::append_letters(e, false, letters);
  return FreeHeapWord(std::move(letters));
}

}  // namespace k0
