#pragma once

// Finitely presented abelian heaps. An element is an affine integer
// combination of generators (coefficients summing to 1), relations are
// sum-zero vectors, and equality is membership in the relation lattice.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "k0heap/expr.hpp"
#include "k0heap/label.hpp"
#include "k0heap/lattice.hpp"

namespace k0 {

// Finitely supported integer combination of generators. Zero coefficients
// are never stored.
class LinearCombination {
 public:
  using Terms = std::map<GeneratorLabel, Integer>;

  LinearCombination() = default;
  explicit LinearCombination(const Terms& terms) {
    for (const auto& [g, k] : terms) add(g, k);
  }

  static LinearCombination of(const GeneratorLabel& g, const Integer& k = 1) {
    LinearCombination out;
    out.add(g, k);
    return out;
  }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  Integer coefficient(const GeneratorLabel& g) const {
    auto it = terms_.find(g);
    return it == terms_.end() ? Integer(0) : it->second;
  }

  Integer sum() const {
    Integer s = 0;
    for (const auto& [g, k] : terms_) s += k;
    return s;
  }

  void add(const GeneratorLabel& g, const Integer& k) {
    if (k == 0) return;
    auto [it, inserted] = terms_.try_emplace(g, k);
    if (!inserted) {
      it->second += k;
      if (it->second == 0) terms_.erase(it);
    }
  }

  LinearCombination& operator+=(const LinearCombination& other) {
    for (const auto& [g, k] : other.terms_) add(g, k);
    return *this;
  }
  LinearCombination& operator-=(const LinearCombination& other) {
    for (const auto& [g, k] : other.terms_) add(g, -k);
    return *this;
  }
  friend LinearCombination operator+(LinearCombination a, const LinearCombination& b) { return a += b; }
  friend LinearCombination operator-(LinearCombination a, const LinearCombination& b) { return a -= b; }
  friend LinearCombination operator*(const Integer& k, const LinearCombination& v) {
    LinearCombination out;
    if (k == 0) return out;
    for (const auto& [g, c] : v.terms_) out.terms_.emplace(g, k * c);
    return out;
  }

  friend bool operator==(const LinearCombination&, const LinearCombination&) = default;

 private:
  Terms terms_;
};

// "{a:1, b:-1, c:1}" with labels in byte order.
inline std::string to_string(const LinearCombination& v) {
  std::string out = "{";
  bool first = true;
  for (const auto& [g, k] : v.terms()) {
    if (!first) out += ", ";
    first = false;
    out += g.name() + ":" + k.str();
  }
  return out + "}";
}

// Element of an abelian heap in normal form: coefficients sum to 1.
class AffineWord {
 public:
  explicit AffineWord(LinearCombination v) : v_(std::move(v)) {
    if (v_.sum() != 1) throw Error("affine word " + to_string(v_) + " has coefficient sum " + v_.sum().str());
  }
  explicit AffineWord(const GeneratorLabel& g) : v_(LinearCombination::of(g)) {}

  const LinearCombination& vector() const noexcept { return v_; }
  Integer coefficient(const GeneratorLabel& g) const { return v_.coefficient(g); }

  friend bool operator==(const AffineWord&, const AffineWord&) = default;

 private:
  LinearCombination v_;
};

inline std::string to_string(const AffineWord& w) { return to_string(w.vector()); }

// [a, b, c] = a - b + c
inline AffineWord bracket(const AffineWord& a, const AffineWord& b, const AffineWord& c) {
  return AffineWord(a.vector() - b.vector() + c.vector());
}

// A generating relation; coefficients sum to 0.
class RelationVector {
 public:
  explicit RelationVector(LinearCombination v) : v_(std::move(v)) {
    if (v_.sum() != 0) throw Error("relation " + to_string(v_) + " has coefficient sum " + v_.sum().str());
  }

  // [x, y, z] = w, stored as x - y + z - w.
  static RelationVector from_bracket(const GeneratorLabel& x, const GeneratorLabel& y, const GeneratorLabel& z,
                                     const GeneratorLabel& w) {
    LinearCombination v;
    v.add(x, 1);
    v.add(y, -1);
    v.add(z, 1);
    v.add(w, -1);
    return RelationVector(std::move(v));
  }

  const LinearCombination& vector() const noexcept { return v_; }
  bool is_zero() const noexcept { return v_.is_zero(); }

  friend bool operator==(const RelationVector&, const RelationVector&) = default;

 private:
  LinearCombination v_;
};

inline std::string to_string(const RelationVector& r) { return to_string(r.vector()); }

namespace detail {

inline void accumulate_affine(const HeapExpr& e, const Integer& sign, LinearCombination& out) {
  if (e.is_leaf()) {
    out.add(e.label(), sign);
    return;
  }
  const auto& kids = e.children();
  if (kids.size() % 2 == 0) {
    throw Error("bracket " + to_string(e) + " has even arity " + std::to_string(kids.size()));
  }
  for (std::size_t i = 0; i < kids.size(); ++i) accumulate_affine(kids[i], i % 2 == 0 ? sign : Integer(-sign), out);
}

}  // namespace detail

// Abelian normal form of an iterated bracket: alternating-sign sum of leaves.
inline AffineWord normalize_affine(const HeapExpr& e) {
  LinearCombination v;
  detail::accumulate_affine(e, 1, v);
  return AffineWord(std::move(v));
}

// Generators plus relation lattice. The Hermite form of the relations is
// computed once at construction; instances are immutable afterwards.
class AbelianHeapPresentation {
 public:
  AbelianHeapPresentation(std::vector<GeneratorLabel> generators, std::vector<RelationVector> relations)
      : generators_(std::move(generators)), relations_(std::move(relations)) {
    if (generators_.empty()) throw Error("a heap presentation needs at least one generator");
    for (std::size_t i = 0; i < generators_.size(); ++i) {
      if (!index_.emplace(generators_[i], i).second) {
        throw Error("duplicate generator '" + generators_[i].name() + "'");
      }
    }
    std::vector<std::vector<Integer>> rows;
    rows.reserve(relations_.size());
    for (const auto& r : relations_) rows.push_back(coordinates(r.vector()));
    matrix_ = IntMatrix::from_rows(rows, generators_.size());
    hermite_ = std::make_shared<const HermiteForm>(hnf(matrix_));
  }

  const std::vector<GeneratorLabel>& generators() const noexcept { return generators_; }
  const std::vector<RelationVector>& relations() const noexcept { return relations_; }
  const IntMatrix& relation_matrix() const noexcept { return matrix_; }
  const HermiteForm& relation_hermite_form() const noexcept { return *hermite_; }

  bool contains(const GeneratorLabel& g) const { return index_.contains(g); }
  std::size_t index_of(const GeneratorLabel& g) const {
    auto it = index_.find(g);
    if (it == index_.end()) throw Error("unknown generator '" + g.name() + "'");
    return it->second;
  }

  // Dense coefficient vector in generator order.
  std::vector<Integer> coordinates(const LinearCombination& v) const {
    std::vector<Integer> out(generators_.size());
    for (const auto& [g, k] : v.terms()) out[index_of(g)] = k;
    return out;
  }

  bool in_relation_lattice(const LinearCombination& v) const {
    return lattice_member(*hermite_, coordinates(v));
  }

 private:
  std::vector<GeneratorLabel> generators_;
  std::vector<RelationVector> relations_;
  std::map<GeneratorLabel, std::size_t> index_;
  IntMatrix matrix_;
  std::shared_ptr<const HermiteForm> hermite_;
};

inline bool word_equal(const AbelianHeapPresentation& p, const AffineWord& a, const AffineWord& b) {
  return p.in_relation_lattice(a.vector() - b.vector());
}

// Two presentations on the same generators whose relation lattices agree.
inline bool same_lattice(const AbelianHeapPresentation& a, const AbelianHeapPresentation& b) {
  if (a.generators() != b.generators()) return false;
  auto inside = [](const AbelianHeapPresentation& from, const AbelianHeapPresentation& into) {
    return std::all_of(from.relations().begin(), from.relations().end(),
                       [&](const RelationVector& r) { return into.in_relation_lattice(r.vector()); });
  };
  return inside(a, b) && inside(b, a);
}

// The retract group (K, +_base) of a presentation: invariant factors plus a
// coordinate map. Coordinates list the free part first, then one entry per
// torsion factor reduced into [0, d).
class GroupStructure {
 public:
  const InvariantFactors& invariants() const noexcept { return invariants_; }
  const GeneratorLabel& base() const noexcept { return base_; }
  std::size_t dimension() const noexcept { return invariants_.rank + invariants_.torsion.size(); }

  std::vector<Integer> coordinates(const AffineWord& w) const {
    std::vector<Integer> shifted(others_.size());
    for (const auto& [g, k] : w.vector().terms()) {
      if (g == base_) continue;
      auto it = std::find(others_.begin(), others_.end(), g);
      if (it == others_.end()) throw Error("unknown generator '" + g.name() + "'");
      shifted[static_cast<std::size_t>(it - others_.begin())] = k;
    }
    const auto m = others_.size();
    std::vector<Integer> image(m);
    for (std::size_t i = 0; i < m; ++i) {
      if (shifted[i] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) image[j] += shifted[i] * basis_change_(i, j);
    }
    std::vector<Integer> out;
    out.reserve(dimension());
    for (std::size_t j = diagonal_.size(); j < m; ++j) out.push_back(image[j] * orientation_[j - diagonal_.size()]);
    for (std::size_t j = 0; j < diagonal_.size(); ++j) {
      if (diagonal_[j] == 1) continue;
      Integer r = image[j] % diagonal_[j];
      if (r < 0) r += diagonal_[j];
      out.push_back(r);
    }
    return out;
  }

  std::vector<Integer> class_coordinates(const GeneratorLabel& g) const { return coordinates(AffineWord(g)); }

  // Flips free axes so that `positive` has no negative free coordinate.
  GroupStructure oriented(const AffineWord& positive) const {
    GroupStructure out = *this;
    const auto c = coordinates(positive);
    for (std::size_t i = 0; i < invariants_.rank; ++i)
      if (c[i] < 0) out.orientation_[i] = -out.orientation_[i];
    return out;
  }

 private:
  friend GroupStructure retract_group_structure(const AbelianHeapPresentation&, const GeneratorLabel&);

  GroupStructure(InvariantFactors invariants, GeneratorLabel base, std::vector<GeneratorLabel> others,
                 IntMatrix basis_change, std::vector<Integer> diagonal)
      : invariants_(std::move(invariants)),
        base_(std::move(base)),
        others_(std::move(others)),
        basis_change_(std::move(basis_change)),
        diagonal_(std::move(diagonal)),
        orientation_(invariants_.rank, 1) {}

  InvariantFactors invariants_;
  GeneratorLabel base_;
  std::vector<GeneratorLabel> others_;
  IntMatrix basis_change_;
  std::vector<Integer> diagonal_;
  std::vector<Integer> orientation_;
};

// The sum-zero lattice has basis {g - base : g != base}; a sum-zero relation
// has the same coefficients in that basis with the base column dropped.
inline GroupStructure retract_group_structure(const AbelianHeapPresentation& p, const GeneratorLabel& base) {
  const auto b = p.index_of(base);
  std::vector<GeneratorLabel> others;
  for (std::size_t i = 0; i < p.generators().size(); ++i)
    if (i != b) others.push_back(p.generators()[i]);

  const auto& full = p.relation_matrix();
  IntMatrix reduced(full.rows(), others.size());
  for (std::size_t r = 0; r < full.rows(); ++r)
    for (std::size_t c = 0, k = 0; c < full.cols(); ++c)
      if (c != b) reduced(r, k++) = full(r, c);

  auto smith = smith_decomposition(reduced);
  InvariantFactors f;
  f.rank = others.size() - smith.diagonal.size();
  for (const auto& d : smith.diagonal)
    if (d != 1) f.torsion.push_back(d);
  return GroupStructure(std::move(f), base, std::move(others), std::move(smith.V), std::move(smith.diagonal));
}

// Generator map between presentations, extended affinely.
class PresentationMorphism {
 public:
  explicit PresentationMorphism(std::map<GeneratorLabel, AffineWord> images) : images_(std::move(images)) {}

  const std::map<GeneratorLabel, AffineWord>& images() const noexcept { return images_; }

  LinearCombination apply(const LinearCombination& v) const {
    LinearCombination out;
    for (const auto& [g, k] : v.terms()) {
      auto it = images_.find(g);
      if (it == images_.end()) throw Error("morphism undefined on '" + g.name() + "'");
      out += k * it->second.vector();
    }
    return out;
  }
  AffineWord apply(const AffineWord& w) const { return AffineWord(apply(w.vector())); }

 private:
  std::map<GeneratorLabel, AffineWord> images_;
};

struct MorphismVerdict {
  bool holds = false;
  // First source relation whose image leaves the target lattice.
  std::optional<std::size_t> witness_index;
  std::optional<RelationVector> witness;
  std::optional<PresentationMorphism> morphism;
};

inline MorphismVerdict induced_morphism(const AbelianHeapPresentation& src, const AbelianHeapPresentation& dst,
                                        const std::map<GeneratorLabel, AffineWord>& genmap) {
  for (const auto& g : src.generators()) {
    auto it = genmap.find(g);
    if (it == genmap.end()) throw Error("generator map undefined on '" + g.name() + "'");
    for (const auto& [h, k] : it->second.vector().terms()) {
      if (!dst.contains(h)) throw Error("image of '" + g.name() + "' uses unknown generator '" + h.name() + "'");
    }
  }
  for (const auto& [g, w] : genmap) {
    if (!src.contains(g)) throw Error("generator map mentions unknown source generator '" + g.name() + "'");
  }
  PresentationMorphism phi(genmap);
  MorphismVerdict verdict;
  for (std::size_t i = 0; i < src.relations().size(); ++i) {
    const auto& r = src.relations()[i];
    if (!dst.in_relation_lattice(phi.apply(r.vector()))) {
      verdict.witness_index = i;
      verdict.witness = r;
      return verdict;
    }
  }
  verdict.holds = true;
  verdict.morphism = std::move(phi);
  return verdict;
}

// Multiplication on generators. Entries must have coefficient sum 1.
struct TrussTable {
  std::map<std::pair<GeneratorLabel, GeneratorLabel>, AffineWord> product;
  std::optional<GeneratorLabel> unit;
};

// Whether a table must cover every generator pair, or may be a truncation of
// an infinite one (missing pairs are then reported, and checks needing them
// are skipped).
enum class TableCoverage { complete, truncated };

enum class Side { left, right };

inline const char* to_string(Side s) { return s == Side::left ? "left" : "right"; }

struct IdealViolation {
  std::size_t relation_index;
  RelationVector relation;
  Side side;
  GeneratorLabel generator;
};

class Truss;

struct TrussCheck {
  bool ok = false;
  std::optional<IdealViolation> violation;
  std::vector<std::pair<GeneratorLabel, GeneratorLabel>> omitted_pairs;
  std::size_t ideal_checks = 0;
  std::size_t ideal_skipped = 0;
  // Informational: checked on every generator triple (pair) where the table
  // is defined.
  bool associative = true;
  std::optional<std::array<GeneratorLabel, 3>> associativity_witness;
  std::optional<bool> unit_law;
  std::shared_ptr<const Truss> truss;
};

// A validated truss: the ideal property held, so the bilinear extension of
// the table is well defined on equality classes.
class Truss {
 public:
  const AbelianHeapPresentation& presentation() const noexcept { return presentation_; }
  const TrussTable& table() const noexcept { return table_; }

  // Bilinear extension; nullopt when a needed entry is missing.
  std::optional<LinearCombination> try_product(const LinearCombination& a, const LinearCombination& b) const {
    LinearCombination out;
    for (const auto& [g, j] : a.terms())
      for (const auto& [h, k] : b.terms()) {
        auto it = table_.product.find({g, h});
        if (it == table_.product.end()) return std::nullopt;
        out += (j * k) * it->second.vector();
      }
    return out;
  }

  AffineWord product(const AffineWord& a, const AffineWord& b) const {
    for (const auto* w : {&a, &b})
      for (const auto& [g, k] : w->vector().terms()) presentation_.index_of(g);
    auto v = try_product(a.vector(), b.vector());
    if (!v) throw Error("product " + to_string(a) + " * " + to_string(b) + " leaves the defined table");
    return AffineWord(std::move(*v));
  }

 private:
  friend TrussCheck truss_from_table(const AbelianHeapPresentation&, const TrussTable&, TableCoverage);
  Truss(AbelianHeapPresentation p, TrussTable t) : presentation_(std::move(p)), table_(std::move(t)) {}

  AbelianHeapPresentation presentation_;
  TrussTable table_;
};

inline TrussCheck truss_from_table(const AbelianHeapPresentation& p, const TrussTable& t,
                                   TableCoverage coverage = TableCoverage::complete) {
  for (const auto& [key, w] : t.product) {
    p.index_of(key.first);
    p.index_of(key.second);
    for (const auto& [g, k] : w.vector().terms()) p.index_of(g);
  }
  if (t.unit) p.index_of(*t.unit);

  TrussCheck check;
  for (const auto& g : p.generators())
    for (const auto& h : p.generators())
      if (!t.product.contains({g, h})) {
        if (coverage == TableCoverage::complete) {
          throw Error("truss table is missing " + g.name() + " * " + h.name());
        }
        check.omitted_pairs.emplace_back(g, h);
      }

  std::shared_ptr<const Truss> truss(new Truss(p, t));

  for (std::size_t i = 0; i < p.relations().size() && !check.violation; ++i) {
    const auto& r = p.relations()[i];
    for (const auto& x : p.generators()) {
      const auto gx = LinearCombination::of(x);
      for (Side side : {Side::left, Side::right}) {
        auto pushed = side == Side::left ? truss->try_product(gx, r.vector()) : truss->try_product(r.vector(), gx);
        if (!pushed) {
          ++check.ideal_skipped;
          continue;
        }
        ++check.ideal_checks;
        if (!p.in_relation_lattice(*pushed)) {
          check.violation = IdealViolation{i, r, side, x};
          break;
        }
      }
      if (check.violation) break;
    }
  }
  if (check.violation) return check;

  for (const auto& g : p.generators())
    for (const auto& h : p.generators())
      for (const auto& k : p.generators()) {
        if (!check.associative) break;
        auto gh = truss->try_product(LinearCombination::of(g), LinearCombination::of(h));
        auto hk = truss->try_product(LinearCombination::of(h), LinearCombination::of(k));
        if (!gh || !hk) continue;
        auto left = truss->try_product(*gh, LinearCombination::of(k));
        auto right = truss->try_product(LinearCombination::of(g), *hk);
        if (!left || !right) continue;
        if (!p.in_relation_lattice(*left - *right)) {
          check.associative = false;
          check.associativity_witness = std::array{g, h, k};
        }
      }
  if (t.unit) {
    bool unit_ok = true;
    const auto u = LinearCombination::of(*t.unit);
    for (const auto& g : p.generators()) {
      const auto gv = LinearCombination::of(g);
      for (const auto& v : {truss->try_product(u, gv), truss->try_product(gv, u)})
        if (v && !p.in_relation_lattice(*v - gv)) unit_ok = false;
    }
    check.unit_law = unit_ok;
  }

  check.ok = true;
  check.truss = std::move(truss);
  return check;
}

inline AffineWord truss_product(const Truss& t, const AffineWord& a, const AffineWord& b) { return t.product(a, b); }

}  // namespace k0
