#pragma once

// Finite category descriptions and the heap presentations they generate.
//
// A category is given by data only: isomorphism classes, pushout squares
// with a flag per leg saying whether it is monic, and optional sum and
// product tables. Each square with a monic leg contributes the relation
// [X, Y, Z] = X +_Y Z, i.e. the vector X - Y + Z - W.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "k0heap/label.hpp"
#include "k0heap/presentation.hpp"

namespace k0 {

// Square  apex -> left, apex -> right, with result left +_apex right.
struct PushoutEntry {
  GeneratorLabel apex;
  GeneratorLabel left;
  GeneratorLabel right;
  bool left_mono = false;
  bool right_mono = false;
  GeneratorLabel result;

  bool generates_relation() const noexcept { return left_mono || right_mono; }
  RelationVector relation() const { return RelationVector::from_bracket(left, apex, right, result); }

  friend auto operator<=>(const PushoutEntry&, const PushoutEntry&) = default;
  friend bool operator==(const PushoutEntry&, const PushoutEntry&) = default;
};

// `left op right = result`, used for both sum and product tables.
struct TableEntry {
  GeneratorLabel left;
  GeneratorLabel right;
  GeneratorLabel result;

  friend auto operator<=>(const TableEntry&, const TableEntry&) = default;
  friend bool operator==(const TableEntry&, const TableEntry&) = default;
};

struct CategorySpec {
  std::vector<GeneratorLabel> objects;
  std::vector<PushoutEntry> pushouts;
  std::optional<GeneratorLabel> zero;
  std::optional<GeneratorLabel> unit;
  std::vector<TableEntry> sums;
  std::vector<TableEntry> products;

  bool has_object(const GeneratorLabel& g) const {
    return std::find(objects.begin(), objects.end(), g) != objects.end();
  }
  bool has_product() const noexcept { return !products.empty() || unit.has_value(); }

  TrussTable truss_table() const {
    TrussTable t;
    for (const auto& p : products) t.product.insert_or_assign({p.left, p.right}, AffineWord(p.result));
    t.unit = unit;
    return t;
  }

  // Objects compare in declaration order; entry lists compare as multisets.
  friend bool operator==(const CategorySpec& a, const CategorySpec& b) {
    auto sorted = [](auto v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    return a.objects == b.objects && a.zero == b.zero && a.unit == b.unit &&
           sorted(a.pushouts) == sorted(b.pushouts) && sorted(a.sums) == sorted(b.sums) &&
           sorted(a.products) == sorted(b.products);
  }
};

enum class Severity { error, warning };

inline const char* to_string(Severity s) { return s == Severity::error ? "error" : "warning"; }

struct SpecIssue {
  Severity severity;
  std::string message;
};

// Diagnostics for a spec; the spec is usable iff none is an error.
struct SpecVerdict {
  std::vector<SpecIssue> issues;

  bool valid() const {
    return std::none_of(issues.begin(), issues.end(), [](const SpecIssue& i) { return i.severity == Severity::error; });
  }
};

inline constexpr const char* kMonoLegMessage =
    "pushout has no monomorphic leg; it generates no relation (mark a leg [mono])";

inline SpecVerdict validate_spec(const CategorySpec& s) {
  SpecVerdict v;
  auto error = [&](std::string m) { v.issues.push_back({Severity::error, std::move(m)}); };

  std::set<GeneratorLabel> declared;
  for (const auto& o : s.objects)
    if (!declared.insert(o).second) error("duplicate object '" + o.name() + "'");

  auto known = [&](const GeneratorLabel& g, const std::string& where) {
    if (declared.contains(g)) return true;
    error("unknown object '" + g.name() + "' in " + where);
    return false;
  };

  if (s.zero) known(*s.zero, "zero declaration");
  if (s.unit) known(*s.unit, "unit declaration");

  for (const auto& p : s.pushouts) {
    const std::string where = "pushout " + p.apex.name() + " -> " + p.left.name() + ", " + p.apex.name() + " -> " +
                              p.right.name() + " => " + p.result.name();
    for (const auto* g : {&p.apex, &p.left, &p.right, &p.result}) known(*g, where);
    if (!p.generates_relation()) v.issues.push_back({Severity::warning, kMonoLegMessage + (": " + where)});
  }

  auto check_table = [&](const std::vector<TableEntry>& table, const char* op, const char* kind) {
    std::map<std::pair<GeneratorLabel, GeneratorLabel>, GeneratorLabel> seen;
    for (const auto& e : table) {
      const std::string where = std::string(kind) + " " + e.left.name() + " " + op + " " + e.right.name() + " = " +
                                e.result.name();
      for (const auto* g : {&e.left, &e.right, &e.result}) known(*g, where);
      auto [it, inserted] = seen.try_emplace({e.left, e.right}, e.result);
      if (!inserted && it->second != e.result) {
        error("conflicting " + std::string(kind) + " entries for " + e.left.name() + " " + op + " " + e.right.name());
      }
    }
    return seen;
  };
  const auto sums = check_table(s.sums, "+", "sum");
  check_table(s.products, "*", "product");

  if (s.zero && !s.sums.empty() && declared.contains(*s.zero)) {
    const auto& z = *s.zero;
    for (const auto& a : s.objects) {
      auto l = sums.find({z, a});
      auto r = sums.find({a, z});
      if (l == sums.end() && r == sums.end()) {
        error("sum table lacks " + z.name() + " + " + a.name() + " for the zero object");
      }
      if (l != sums.end() && l->second != a) error("zero object is not neutral: " + z.name() + " + " + a.name() + " = " + l->second.name());
      if (r != sums.end() && r->second != a) error("zero object is not neutral: " + a.name() + " + " + z.name() + " = " + r->second.name());
    }
  }
  return v;
}

namespace detail {

inline void require_valid(const CategorySpec& s) {
  const auto verdict = validate_spec(s);
  if (verdict.valid()) return;
  for (const auto& i : verdict.issues)
    if (i.severity == Severity::error) throw Error("invalid category spec: " + i.message);
}

}  // namespace detail

// How the pushout list turned into relations.
struct RelationSummary {
  std::vector<RelationVector> relations;
  // Squares whose relation vector vanished (e.g. identity pushouts).
  std::size_t trivial = 0;
  // Squares without a monic leg.
  std::size_t excluded = 0;
};

inline RelationSummary k0_relations(const CategorySpec& s) {
  detail::require_valid(s);
  RelationSummary out;
  for (const auto& p : s.pushouts) {
    if (!p.generates_relation()) {
      ++out.excluded;
      continue;
    }
    auto r = p.relation();
    if (r.is_zero()) {
      ++out.trivial;
      continue;
    }
    out.relations.push_back(std::move(r));
  }
  return out;
}

inline AbelianHeapPresentation k0_presentation(const CategorySpec& s) {
  return AbelianHeapPresentation(s.objects, k0_relations(s).relations);
}

inline GroupStructure k0_group(const CategorySpec& s, const GeneratorLabel& base) {
  return retract_group_structure(k0_presentation(s), base);
}

// Relations A - 0 + B - (A + B), the heap form of A + B = A (+) B.
inline AbelianHeapPresentation split_presentation(const CategorySpec& s) {
  detail::require_valid(s);
  if (!s.zero) throw Error("split presentation needs a zero object");
  std::vector<RelationVector> relations;
  for (const auto& e : s.sums) {
    auto r = RelationVector::from_bracket(e.left, *s.zero, e.right, e.result);
    if (!r.is_zero()) relations.push_back(std::move(r));
  }
  return AbelianHeapPresentation(s.objects, std::move(relations));
}

struct ProjectionVerdict {
  // split lattice inside full lattice: the identity on generators descends
  // to a surjection of retract groups.
  bool contained = false;
  std::optional<RelationVector> containment_witness;
  // The projection is injective exactly when the lattices coincide.
  bool equal = false;
  std::optional<RelationVector> strictness_witness;
};

inline ProjectionVerdict compare_projection(const AbelianHeapPresentation& split, const AbelianHeapPresentation& full) {
  if (split.generators() != full.generators()) throw Error("split and full presentations have different generators");
  ProjectionVerdict v;
  v.contained = true;
  for (const auto& r : split.relations())
    if (!full.in_relation_lattice(r.vector())) {
      v.contained = false;
      v.containment_witness = r;
      break;
    }
  v.equal = v.contained;
  for (const auto& r : full.relations())
    if (!split.in_relation_lattice(r.vector())) {
      v.equal = false;
      v.strictness_witness = r;
      break;
    }
  return v;
}

struct FunctorSpec {
  CategorySpec source;
  CategorySpec target;
  std::map<GeneratorLabel, GeneratorLabel> object_map;
};

struct TrussMorphismStatus {
  bool holds = true;
  std::size_t checked = 0;
  // Source products whose image pair has no target product entry.
  std::vector<TableEntry> unverified;
  std::optional<TableEntry> witness;
  bool unit_preserved = true;
};

struct FunctorVerdict {
  MorphismVerdict heap;
  std::optional<TrussMorphismStatus> truss;
};

inline FunctorVerdict functor_induced(const FunctorSpec& f) {
  detail::require_valid(f.source);
  detail::require_valid(f.target);
  std::map<GeneratorLabel, AffineWord> genmap;
  for (const auto& o : f.source.objects) {
    auto it = f.object_map.find(o);
    if (it == f.object_map.end()) throw Error("object map undefined on '" + o.name() + "'");
    if (!f.target.has_object(it->second)) {
      throw Error("object map sends '" + o.name() + "' to unknown target object '" + it->second.name() + "'");
    }
    genmap.emplace(o, AffineWord(it->second));
  }
  const auto src = k0_presentation(f.source);
  const auto dst = k0_presentation(f.target);

  FunctorVerdict out;
  out.heap = induced_morphism(src, dst, genmap);
  if (!out.heap.holds || !f.source.has_product() || !f.target.has_product()) return out;

  TrussMorphismStatus status;
  const auto target_table = f.target.truss_table();
  const auto& F = f.object_map;
  for (const auto& e : f.source.products) {
    auto it = target_table.product.find({F.at(e.left), F.at(e.right)});
    if (it == target_table.product.end()) {
      status.unverified.push_back(e);
      continue;
    }
    ++status.checked;
    if (!word_equal(dst, it->second, AffineWord(F.at(e.result)))) {
      status.holds = false;
      status.witness = e;
      break;
    }
  }
  if (f.source.unit) {
    status.unit_preserved = f.target.unit && word_equal(dst, AffineWord(F.at(*f.source.unit)), AffineWord(*f.target.unit));
    if (!status.unit_preserved) status.holds = false;
  }
  out.truss = std::move(status);
  return out;
}

}  // namespace k0
