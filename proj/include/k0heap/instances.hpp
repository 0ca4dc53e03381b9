#pragma once

// Concrete categories: finite sets, finite-dimensional vector spaces, an
// Eilenberg swindle, a small closure of finitely generated abelian groups,
// and CW complexes described by their cell counts.
//
// Infinite categories are truncated at a size bound N. A pushout square is
// listed only when its result stays within the bound, and product and sum
// tables are partial.

#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include <boost/pending/disjoint_sets.hpp>

#include "k0heap/category.hpp"
#include "k0heap/dsl.hpp"
#include "k0heap/expr.hpp"
#include "k0heap/presentation.hpp"

namespace k0 {

// A span A <-f- B -g-> C of finite sets {0..n-1}; f must be injective.
struct FiniteSetSpan {
  std::size_t size_a = 0;
  std::size_t size_b = 0;
  std::size_t size_c = 0;
  std::vector<std::size_t> f;
  std::vector<std::size_t> g;
};

struct SetElement {
  enum class Side { a, c } side;
  std::size_t index;

  friend bool operator==(const SetElement&, const SetElement&) = default;
};

struct SetPushout {
  // Equivalence classes of A + C, each listed in A-then-C index order.
  std::vector<std::vector<SetElement>> classes;

  std::size_t size() const noexcept { return classes.size(); }
};

// A +_B C = (A + C) / (f(b) ~ g(b)), computed with union-find.
inline SetPushout set_pushout(const FiniteSetSpan& span) {
  if (span.f.size() != span.size_b || span.g.size() != span.size_b) throw Error("span maps must be total on B");
  std::vector<bool> hit(span.size_a, false);
  for (std::size_t b = 0; b < span.size_b; ++b) {
    if (span.f[b] >= span.size_a || span.g[b] >= span.size_c) throw Error("span map value out of range");
    if (hit[span.f[b]]) throw Error("the leg B -> A must be injective");
    hit[span.f[b]] = true;
  }

  const auto n = span.size_a + span.size_c;
  std::vector<std::size_t> rank(n), parent(n);
  boost::disjoint_sets<std::size_t*, std::size_t*> sets(rank.data(), parent.data());
  for (std::size_t i = 0; i < n; ++i) sets.make_set(i);
  for (std::size_t b = 0; b < span.size_b; ++b) sets.union_set(span.f[b], span.size_a + span.g[b]);

  SetPushout out;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = sets.find_set(i);
    if (slot[root] == n) {
      slot[root] = out.classes.size();
      out.classes.emplace_back();
    }
    out.classes[slot[root]].push_back(i < span.size_a ? SetElement{SetElement::Side::a, i}
                                                      : SetElement{SetElement::Side::c, i - span.size_a});
  }
  return out;
}

namespace detail {

// Shared skeleton of the cardinality/dimension categories: classes 0..N with
// squares (a, b, c) -> a - b + c for b <= a, b <= c, the left leg monic.
inline CategorySpec counting_spec(std::size_t bound, const std::function<GeneratorLabel(std::size_t)>& label) {
  if (bound < 1) throw Error("size bound must be at least 1");
  CategorySpec s;
  for (std::size_t n = 0; n <= bound; ++n) s.objects.push_back(label(n));
  for (std::size_t a = 0; a <= bound; ++a)
    for (std::size_t b = 0; b <= a; ++b)
      for (std::size_t c = b; c <= bound; ++c) {
        const auto r = a - b + c;
        if (r > bound) continue;
        s.pushouts.push_back({label(b), label(a), label(c), true, false, label(r)});
      }
  for (std::size_t m = 0; m <= bound; ++m)
    for (std::size_t n = 0; n <= bound; ++n) {
      if (m + n <= bound) s.sums.push_back({label(m), label(n), label(m + n)});
      if (m * n <= bound) s.products.push_back({label(m), label(n), label(m * n)});
    }
  s.unit = label(1);
  return s;
}

}  // namespace detail

// Label of the cardinality-n class of finite sets.
inline GeneratorLabel set_label(std::size_t n) { return n == 0 ? GeneratorLabel("empty") : GeneratorLabel(std::to_string(n)); }

// Finite sets of size at most N, up to isomorphism. Every square is checked
// against an actual pushout of sets.
inline CategorySpec finite_sets_spec(std::size_t bound) {
  auto s = detail::counting_spec(bound, set_label);
  for (std::size_t a = 0; a <= bound; ++a)
    for (std::size_t b = 0; b <= a; ++b)
      for (std::size_t c = b; c <= bound && a - b + c <= bound; ++c) {
        FiniteSetSpan span{a, b, c, {}, {}};
        for (std::size_t i = 0; i < b; ++i) {
          span.f.push_back(i);
          span.g.push_back(i);
        }
        if (set_pushout(span).size() != a - b + c) throw Error("finite set pushout disagrees with a - b + c");
      }
  return s;
}

inline GeneratorLabel dimension_label(std::size_t n) { return GeneratorLabel(std::to_string(n)); }

// Vector spaces of dimension at most N; the zero space is `0`.
inline CategorySpec vect_spec(std::size_t bound) {
  auto s = detail::counting_spec(bound, dimension_label);
  s.zero = dimension_label(0);
  return s;
}

inline const GeneratorLabel& swindle_label() {
  static const GeneratorLabel omega("omega");
  return omega;
}

// vect_spec(N) plus an absorbing object omega with V + omega = omega.
inline CategorySpec swindle_spec(std::size_t bound) {
  auto s = vect_spec(bound);
  const auto& omega = swindle_label();
  const auto zero = dimension_label(0);
  s.objects.push_back(omega);
  for (std::size_t v = 0; v <= bound; ++v) {
    s.pushouts.push_back({zero, dimension_label(v), omega, true, false, omega});
    s.sums.push_back({dimension_label(v), omega, omega});
  }
  s.pushouts.push_back({zero, omega, omega, true, false, omega});
  s.sums.push_back({omega, omega, omega});
  return s;
}

// Hand-written closure of a few finitely generated abelian groups. Each
// pushout square transcribes a short exact sequence 0 -> A -> B -> C -> 0 as
// the square A -> B (monic), A -> 0 with pushout C, or a split sequence as a
// pushout over 0.
inline constexpr std::string_view kBoundedAbelianGroups = R"(# Finitely generated abelian groups, a small closed sample.
# Labels: Z^2 is Z+Z, Z+Z/2 and Z/2+Z/2 are direct sums.

object 0
object Z
object Z^2
object Z/2
object Z/3
object Z/4
object Z/6
object Z+Z/2
object Z/2+Z/2
zero 0

# split sequences: pushouts over the zero object
pushout 0 -> 0 [mono], 0 -> 0 [mono] => 0
pushout 0 -> Z [mono], 0 -> Z [mono] => Z^2
pushout 0 -> Z [mono], 0 -> Z/2 [mono] => Z+Z/2
pushout 0 -> Z/2 [mono], 0 -> Z/3 [mono] => Z/6
pushout 0 -> Z/2 [mono], 0 -> Z/2 [mono] => Z/2+Z/2

# 0 -> Z -n-> Z -> Z/n -> 0
pushout Z -> Z [mono], Z -> 0 => Z/2
pushout Z -> Z [mono], Z -> 0 => Z/3
pushout Z -> Z [mono], Z -> 0 => Z/4
pushout Z -> Z [mono], Z -> 0 => Z/6

# 0 -> Z/2 -> Z/4 -> Z/2 -> 0, not split
pushout Z/2 -> Z/4 [mono], Z/2 -> 0 => Z/2

sum 0 + 0 = 0
sum 0 + Z = Z
sum 0 + Z^2 = Z^2
sum 0 + Z/2 = Z/2
sum 0 + Z/3 = Z/3
sum 0 + Z/4 = Z/4
sum 0 + Z/6 = Z/6
sum 0 + Z+Z/2 = Z+Z/2
sum 0 + Z/2+Z/2 = Z/2+Z/2
sum Z + Z = Z^2
sum Z + Z/2 = Z+Z/2
sum Z/2 + Z = Z+Z/2
sum Z/2 + Z/3 = Z/6
sum Z/3 + Z/2 = Z/6
sum Z/2 + Z/2 = Z/2+Z/2
)";

inline CategorySpec bounded_abelian_groups_file() {
  auto parsed = parse_spec(SpecSource{std::string(kBoundedAbelianGroups), "zmod.cat"});
  if (!parsed.ok()) throw Error("built-in abelian group data failed to parse");
  return std::move(*parsed.value);
}

// Cell counts |I_0|, ..., |I_n| of a finite CW complex.
struct CWComplexSpec {
  std::vector<std::size_t> cell_counts;

  CWComplexSpec() = default;
  explicit CWComplexSpec(std::vector<std::size_t> counts) : cell_counts(std::move(counts)) {
    if (cell_counts.empty()) throw Error("a CW complex needs a 0-skeleton");
    if (cell_counts.front() == 0) throw Error("a CW complex needs at least one 0-cell");
  }

  std::size_t dimension() const noexcept { return cell_counts.size() - 1; }
};

// Which sphere a k-disk is glued along: S^k as drawn in the source diagram,
// or the usual boundary sphere S^(k-1).
enum class CellConvention { paper, standard };

inline const GeneratorLabel& cw_empty() {
  static const GeneratorLabel g("empty");
  return g;
}
inline const GeneratorLabel& cw_point() {
  static const GeneratorLabel g("pt");
  return g;
}
inline GeneratorLabel cw_sphere(std::size_t k) { return GeneratorLabel("S^" + std::to_string(k)); }
inline GeneratorLabel cw_disk(std::size_t k) { return GeneratorLabel("D^" + std::to_string(k)); }

inline GeneratorLabel cw_attaching_sphere(std::size_t k, CellConvention convention) {
  return cw_sphere(convention == CellConvention::paper ? k : k - 1);
}

// {empty, pt, S^0..S^n, D^1..D^n}
inline std::vector<GeneratorLabel> cw_generators(std::size_t dimension) {
  std::vector<GeneratorLabel> out{cw_empty(), cw_point()};
  for (std::size_t k = 0; k <= dimension; ++k) out.push_back(cw_sphere(k));
  for (std::size_t k = 1; k <= dimension; ++k) out.push_back(cw_disk(k));
  return out;
}

namespace detail {

// Class of a disjoint union of `count` copies of g: a pushout over the
// initial object, so count*g - (count-1)*empty.
inline LinearCombination disjoint_copies(std::size_t count, const GeneratorLabel& g) {
  LinearCombination v = LinearCombination::of(g, static_cast<long long>(count));
  v.add(cw_empty(), -static_cast<long long>(count) + 1);
  return v;
}

inline HeapExpr disjoint_copies_expr(std::size_t count, const GeneratorLabel& g) {
  if (count == 0) return HeapExpr::leaf(cw_empty());
  if (count == 1) return HeapExpr::leaf(g);
  std::vector<HeapExpr> parts;
  for (std::size_t i = 0; i < count; ++i) {
    if (i) parts.push_back(HeapExpr::leaf(cw_empty()));
    parts.push_back(HeapExpr::leaf(g));
  }
  return HeapExpr::node(std::move(parts));
}

}  // namespace detail

// X_0 = |I_0| points, X_k = [U D^k, U S, X_(k-1)], expanded.
inline AffineWord cw_class(const CWComplexSpec& c, CellConvention convention = CellConvention::paper) {
  LinearCombination x = detail::disjoint_copies(c.cell_counts[0], cw_point());
  for (std::size_t k = 1; k <= c.dimension(); ++k) {
    x = detail::disjoint_copies(c.cell_counts[k], cw_disk(k)) -
        detail::disjoint_copies(c.cell_counts[k], cw_attaching_sphere(k, convention)) + x;
  }
  return AffineWord(std::move(x));
}

// [U D^n, U S, ..., U D^1, U S, X_0] with U the disjoint-union bracket.
inline HeapExpr cw_word(const CWComplexSpec& c, CellConvention convention = CellConvention::paper) {
  auto base = detail::disjoint_copies_expr(c.cell_counts[0], cw_point());
  if (c.dimension() == 0) return base;
  std::vector<HeapExpr> parts;
  for (std::size_t k = c.dimension(); k >= 1; --k) {
    parts.push_back(detail::disjoint_copies_expr(c.cell_counts[k], cw_disk(k)));
    parts.push_back(detail::disjoint_copies_expr(c.cell_counts[k], cw_attaching_sphere(k, convention)));
  }
  parts.push_back(std::move(base));
  return HeapExpr::node(std::move(parts));
}

// One line per dimension, each holding that dimension's cell count.
inline Parsed<CWComplexSpec> parse_cw_counts(const SpecSource& src) {
  Parsed<CWComplexSpec> out;
  std::vector<std::size_t> counts;
  for (const auto& line : detail::lex_lines(src.text)) {
    const auto& t = line.tokens.front();
    if (line.tokens.size() > 1) {
      out.diagnostics.push_back({Severity::error, line.number, line.tokens[1].column, "expected one cell count per line"});
      continue;
    }
    if (t.text.empty() || t.text.size() > 9 ||
        !std::all_of(t.text.begin(), t.text.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      out.diagnostics.push_back({Severity::error, line.number, t.column, "not a cell count: '" + t.text + "'"});
      continue;
    }
    if (counts.empty() && t.text.find_first_not_of('0') == std::string::npos) {
      out.diagnostics.push_back({Severity::error, line.number, t.column, "a CW complex needs at least one 0-cell"});
      continue;
    }
    counts.push_back(std::stoul(t.text));
  }
  if (counts.empty() && out.diagnostics.empty()) out.diagnostics.push_back({Severity::error, 1, 1, "no cell counts given"});
  if (out.error_count() == 0) out.value = CWComplexSpec(std::move(counts));
  return out;
}

}  // namespace k0
