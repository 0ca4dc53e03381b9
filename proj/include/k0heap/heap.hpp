#pragma once

// Ternary heap algebra: free heap words, finite heap and group models, and
// the translation between a heap and its retract groups.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "k0heap/label.hpp"

namespace k0 {

// An odd-length word [x1, ..., xn] in the free heap. Values are immutable.
class FreeHeapWord {
 public:
  explicit FreeHeapWord(std::vector<GeneratorLabel> letters) : letters_(std::move(letters)) {
    if (letters_.size() % 2 == 0) {
      throw Error("free heap word must have odd length, got " + std::to_string(letters_.size()));
    }
  }
  explicit FreeHeapWord(GeneratorLabel letter) : letters_{std::move(letter)} {}

  std::span<const GeneratorLabel> letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }

  // No two adjacent letters coincide; this is exactly when neither
  // cancellation [.., x, x, ..] can fire.
  bool is_reduced() const noexcept {
    return std::adjacent_find(letters_.begin(), letters_.end()) == letters_.end();
  }

  // The same element with the sign pattern flipped, i.e. the word occupying
  // an inverted (even) slot of an enclosing bracket.
  FreeHeapWord reversed() const {
    return FreeHeapWord(std::vector<GeneratorLabel>(letters_.rbegin(), letters_.rend()));
  }

  friend bool operator==(const FreeHeapWord&, const FreeHeapWord&) = default;
  friend auto operator<=>(const FreeHeapWord&, const FreeHeapWord&) = default;

 private:
  std::vector<GeneratorLabel> letters_;
};

inline std::string to_string(const FreeHeapWord& w) {
  if (w.size() == 1) return w.letters().front().name();
  std::string out = "[";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ',';
    out += w.letters()[i].name();
  }
  return out + "]";
}

// Normal form of an odd letter sequence. The sequence is read in the free
// group as x1 x2^-1 x3 ... xn; free reduction keeps the sign pattern
// alternating, so cancelling equal neighbours with a stack is the whole
// algorithm.
inline FreeHeapWord reduce_letters(std::span<const GeneratorLabel> letters) {
  if (letters.size() % 2 == 0) {
    throw Error("cannot reduce an even-length heap word (length " + std::to_string(letters.size()) + ")");
  }
  std::vector<GeneratorLabel> stack;
  stack.reserve(letters.size());
  for (const auto& x : letters) {
    if (!stack.empty() && stack.back() == x) {
      stack.pop_back();
    } else {
      stack.push_back(x);
    }
  }
  return FreeHeapWord(std::move(stack));
}

inline FreeHeapWord reduce_word(const FreeHeapWord& w) { return reduce_letters(w.letters()); }

// [w1, ..., wk] for an odd number of words. Words in even slots enter
// reversed, since [a, [b,c,d], e] = [a, d, c, b, e].
inline FreeHeapWord nary_product(std::span<const FreeHeapWord> words) {
  if (words.size() % 2 == 0) {
    throw Error("heap product needs an odd number of arguments, got " + std::to_string(words.size()));
  }
  std::vector<GeneratorLabel> letters;
  for (std::size_t i = 0; i < words.size(); ++i) {
    auto part = words[i].letters();
    if (i % 2 == 0) {
      letters.insert(letters.end(), part.begin(), part.end());
    } else {
      letters.insert(letters.end(), part.rbegin(), part.rend());
    }
  }
  return reduce_letters(letters);
}

inline FreeHeapWord nary_product(std::initializer_list<FreeHeapWord> words) {
  return nary_product(std::span<const FreeHeapWord>(words.begin(), words.size()));
}

namespace detail {

inline std::vector<GeneratorLabel> checked_carrier(std::vector<GeneratorLabel> carrier) {
  auto sorted = carrier;
  std::sort(sorted.begin(), sorted.end());
  if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
    throw Error("duplicate carrier element '" + dup->name() + "'");
  }
  return carrier;
}

inline void check_table(const std::vector<std::size_t>& table, std::size_t expected, std::size_t n,
                        const char* what) {
  if (table.size() != expected) {
    throw Error(std::string(what) + " table has " + std::to_string(table.size()) + " entries, expected " +
                std::to_string(expected));
  }
  for (auto v : table) {
    if (v >= n) throw Error(std::string(what) + " table entry out of range");
  }
}

}  // namespace detail

// Outcome of an exhaustive axiom check. `witness` holds carrier indices.
struct AxiomReport {
  bool ok = true;
  std::string law;
  std::vector<std::size_t> witness;

  explicit operator bool() const noexcept { return ok; }
};

// A finite group given by total tables over carrier indices.
class GroupModel {
 public:
  GroupModel(std::vector<GeneratorLabel> carrier, std::vector<std::size_t> op, std::size_t identity,
             std::vector<std::size_t> inverse)
      : carrier_(detail::checked_carrier(std::move(carrier))),
        op_(std::move(op)),
        identity_(identity),
        inverse_(std::move(inverse)) {
    const auto n = carrier_.size();
    if (n == 0) throw Error("group carrier must be non-empty");
    if (identity_ >= n) throw Error("group identity out of range");
    detail::check_table(op_, n * n, n, "group operation");
    detail::check_table(inverse_, n, n, "group inverse");
  }

  std::size_t size() const noexcept { return carrier_.size(); }
  std::span<const GeneratorLabel> carrier() const noexcept { return carrier_; }
  const GeneratorLabel& label(std::size_t i) const { return carrier_.at(i); }
  std::size_t identity() const noexcept { return identity_; }
  std::size_t op(std::size_t a, std::size_t b) const { return op_[a * size() + b]; }
  std::size_t inverse(std::size_t a) const { return inverse_[a]; }

  std::optional<std::size_t> index_of(const GeneratorLabel& x) const {
    auto it = std::find(carrier_.begin(), carrier_.end(), x);
    if (it == carrier_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - carrier_.begin());
  }

  friend bool operator==(const GroupModel&, const GroupModel&) = default;

 private:
  std::vector<GeneratorLabel> carrier_;
  std::vector<std::size_t> op_;
  std::size_t identity_;
  std::vector<std::size_t> inverse_;
};

inline AxiomReport check_group_axioms(const GroupModel& g) {
  const auto n = g.size();
  const auto e = g.identity();
  for (std::size_t a = 0; a < n; ++a) {
    if (g.op(e, a) != a || g.op(a, e) != a) return {false, "identity", {a}};
    if (g.op(a, g.inverse(a)) != e || g.op(g.inverse(a), a) != e) return {false, "inverse", {a}};
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (g.op(g.op(a, b), c) != g.op(a, g.op(b, c))) return {false, "associativity", {a, b, c}};
  return {};
}

// A finite heap given by its total ternary table.
class FiniteHeapModel {
 public:
  FiniteHeapModel(std::vector<GeneratorLabel> carrier, std::vector<std::size_t> ternary)
      : carrier_(detail::checked_carrier(std::move(carrier))), ternary_(std::move(ternary)) {
    const auto n = carrier_.size();
    detail::check_table(ternary_, n * n * n, n, "heap ternary");
  }

  std::size_t size() const noexcept { return carrier_.size(); }
  std::span<const GeneratorLabel> carrier() const noexcept { return carrier_; }
  const GeneratorLabel& label(std::size_t i) const { return carrier_.at(i); }
  std::size_t bracket(std::size_t a, std::size_t b, std::size_t c) const {
    return ternary_[(a * size() + b) * size() + c];
  }

  std::optional<std::size_t> index_of(const GeneratorLabel& x) const {
    auto it = std::find(carrier_.begin(), carrier_.end(), x);
    if (it == carrier_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - carrier_.begin());
  }

  friend bool operator==(const FiniteHeapModel&, const FiniteHeapModel&) = default;

 private:
  std::vector<GeneratorLabel> carrier_;
  std::vector<std::size_t> ternary_;
};

// Mal'cev identities and para-associativity, exhaustively. An empty carrier
// passes vacuously.
inline AxiomReport check_heap_axioms(const FiniteHeapModel& h) {
  const auto n = h.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (h.bracket(x, x, y) != y) return {false, "mal'cev [x,x,y]=y", {x, x, y}};
      if (h.bracket(y, x, x) != y) return {false, "mal'cev [y,x,x]=y", {y, x, x}};
    }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const auto abc = h.bracket(a, b, c);
        for (std::size_t d = 0; d < n; ++d)
          for (std::size_t e = 0; e < n; ++e)
            if (h.bracket(a, b, h.bracket(c, d, e)) != h.bracket(abc, d, e))
              return {false, "para-associativity", {a, b, c, d, e}};
      }
  return {};
}

namespace detail {

inline std::string describe(std::span<const GeneratorLabel> carrier, const AxiomReport& r) {
  std::string out = r.law + " fails at (";
  for (std::size_t i = 0; i < r.witness.size(); ++i) {
    if (i) out += ',';
    out += carrier[r.witness[i]].name();
  }
  return out + ")";
}

}  // namespace detail

// (H, +_e) with a +_e b = [a,e,b] and -_e a = [e,a,e].
inline GroupModel retract_group(const FiniteHeapModel& h, const GeneratorLabel& e) {
  const auto base = h.index_of(e);
  if (!base) throw Error("retract basepoint '" + e.name() + "' is not in the heap");
  if (auto report = check_heap_axioms(h); !report) {
    throw Error("not a heap: " + detail::describe(h.carrier(), report));
  }
  const auto n = h.size();
  std::vector<std::size_t> op(n * n), inverse(n);
  for (std::size_t a = 0; a < n; ++a) {
    inverse[a] = h.bracket(*base, a, *base);
    for (std::size_t b = 0; b < n; ++b) op[a * n + b] = h.bracket(a, *base, b);
  }
  return GroupModel({h.carrier().begin(), h.carrier().end()}, std::move(op), *base, std::move(inverse));
}

// [a,b,c] = a - b + c computed in g.
inline FiniteHeapModel heap_from_group(const GroupModel& g) {
  if (auto report = check_group_axioms(g); !report) {
    throw Error("not a group: " + detail::describe(g.carrier(), report));
  }
  const auto n = g.size();
  std::vector<std::size_t> ternary(n * n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) ternary[(a * n + b) * n + c] = g.op(a, g.op(g.inverse(b), c));
  return FiniteHeapModel({g.carrier().begin(), g.carrier().end()}, std::move(ternary));
}

struct HeapMorphismVerdict {
  bool holds = true;
  // Source labels (x, y, z) with [f x, f y, f z] != f [x, y, z].
  std::optional<std::array<GeneratorLabel, 3>> witness;
  // Set when a basepoint was supplied and the bracket law held: whether
  // f(a +_e b) = f(a) +_{f(e)} f(b) for all a, b.
  std::optional<bool> retract_homomorphism;
};

inline HeapMorphismVerdict check_heap_morphism(const std::map<GeneratorLabel, GeneratorLabel>& map,
                                               const FiniteHeapModel& src, const FiniteHeapModel& dst,
                                               const std::optional<GeneratorLabel>& base = std::nullopt) {
  std::vector<std::size_t> f(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto it = map.find(src.label(i));
    if (it == map.end()) throw Error("heap morphism undefined on '" + src.label(i).name() + "'");
    auto j = dst.index_of(it->second);
    if (!j) throw Error("heap morphism image '" + it->second.name() + "' is not in the target");
    f[i] = *j;
  }
  HeapMorphismVerdict verdict;
  const auto n = src.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (dst.bracket(f[x], f[y], f[z]) != f[src.bracket(x, y, z)]) {
          verdict.holds = false;
          verdict.witness = std::array{src.label(x), src.label(y), src.label(z)};
          return verdict;
        }
  if (base) {
    const auto e = src.index_of(*base);
    if (!e) throw Error("basepoint '" + base->name() + "' is not in the source heap");
    const auto g = retract_group(src, *base);
    const auto h = retract_group(dst, dst.label(f[*e]));
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a)
      for (std::size_t b = 0; b < n && ok; ++b) ok = f[g.op(a, b)] == h.op(f[a], f[b]);
    verdict.retract_homomorphism = ok;
  }
  return verdict;
}

// Z/n with elements labelled "0" .. "n-1".
inline GroupModel cyclic_group(std::size_t n) {
  if (n == 0) throw Error("cyclic group order must be positive");
  std::vector<GeneratorLabel> carrier;
  std::vector<std::size_t> op(n * n), inverse(n);
  for (std::size_t a = 0; a < n; ++a) {
    carrier.emplace_back(std::to_string(a));
    inverse[a] = (n - a) % n;
    for (std::size_t b = 0; b < n; ++b) op[a * n + b] = (a + b) % n;
  }
  return GroupModel(std::move(carrier), std::move(op), 0, std::move(inverse));
}

// Z/2 x Z/2 on {e, a, b, c}; index bits give the coordinates.
inline GroupModel klein_four_group() {
  std::vector<std::size_t> op(16), inverse{0, 1, 2, 3};
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) op[a * 4 + b] = a ^ b;
  return GroupModel({"e"_g, "a"_g, "b"_g, "c"_g}, std::move(op), 0, std::move(inverse));
}

// An isomorphism a -> b as a carrier-index table, found by backtracking over
// images of a greedy generating set. Exhaustive over all homomorphisms that
// could be bijective.
inline std::optional<std::vector<std::size_t>> find_group_isomorphism(const GroupModel& a, const GroupModel& b) {
  const auto n = a.size();
  if (n != b.size()) return std::nullopt;

  auto order = [](const GroupModel& g, std::size_t x) {
    std::size_t k = 1;
    for (auto y = x; y != g.identity(); y = g.op(y, x)) ++k;
    return k;
  };
  auto closure = [&](const std::vector<std::size_t>& gens) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> queue{a.identity()};
    seen[a.identity()] = true;
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (auto s : gens)
        if (auto y = a.op(queue[i], s); !seen[y]) {
          seen[y] = true;
          queue.push_back(y);
        }
    return queue.size();
  };

  std::vector<std::size_t> gens;
  for (std::size_t x = 0; x < n && closure(gens) < n; ++x) {
    auto trial = gens;
    trial.push_back(x);
    if (closure(trial) > closure(gens)) gens = std::move(trial);
  }

  std::vector<std::size_t> images(gens.size());
  std::optional<std::vector<std::size_t>> found;

  auto extend = [&]() -> std::optional<std::vector<std::size_t>> {
    constexpr auto unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> f(n, unset);
    f[a.identity()] = b.identity();
    std::vector<std::size_t> queue{a.identity()};
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const auto x = queue[i];
      for (std::size_t k = 0; k < gens.size(); ++k) {
        const auto y = a.op(x, gens[k]);
        const auto fy = b.op(f[x], images[k]);
        if (f[y] == unset) {
          f[y] = fy;
          queue.push_back(y);
        } else if (f[y] != fy) {
          return std::nullopt;
        }
      }
    }
    std::vector<bool> hit(n, false);
    for (auto v : f) {
      if (hit[v]) return std::nullopt;
      hit[v] = true;
    }
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (f[a.op(x, y)] != b.op(f[x], f[y])) return std::nullopt;
    return f;
  };

  auto search = [&](auto&& self, std::size_t k) -> void {
    if (found) return;
    if (k == gens.size()) {
      found = extend();
      return;
    }
    const auto want = order(a, gens[k]);
    for (std::size_t c = 0; c < n && !found; ++c) {
      if (order(b, c) != want) continue;
      images[k] = c;
      self(self, k + 1);
    }
  };
  search(search, 0);
  return found;
}

}  // namespace k0
