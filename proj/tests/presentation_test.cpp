#include "k0heap/presentation.hpp"

#include <random>

#include "gtest/gtest.h"
#include "k0heap/category.hpp"
#include "k0heap/instances.hpp"

namespace k0 {
namespace {

HeapExpr L(const char* x) { return HeapExpr::leaf(GeneratorLabel(x)); }

AffineWord W(const char* x) { return AffineWord(GeneratorLabel(x)); }

LinearCombination terms(std::initializer_list<std::pair<const char*, int>> xs) {
  LinearCombination v;
  for (const auto& [g, k] : xs) v.add(GeneratorLabel(g), k);
  return v;
}

std::vector<GeneratorLabel> labels(std::initializer_list<const char*> xs) {
  std::vector<GeneratorLabel> out;
  for (const auto* x : xs) out.emplace_back(x);
  return out;
}

// x - y + z - w for the square [x, y, z] = w.
AbelianHeapPresentation one_square() {
  return AbelianHeapPresentation(labels({"x", "y", "z", "w"}), {RelationVector::from_bracket("x"_g, "y"_g, "z"_g, "w"_g)});
}

TEST(NormalizeAffine, Examples) {
  EXPECT_EQ(normalize_affine(HeapExpr::node({L("x"), L("y"), L("z")})).vector(), terms({{"x", 1}, {"y", -1}, {"z", 1}}));
  EXPECT_EQ(normalize_affine(HeapExpr::node({L("x"), L("x"), L("y")})), W("y"));
  EXPECT_EQ(normalize_affine(HeapExpr::node({L("a"), L("b"), HeapExpr::node({L("b"), L("a"), L("c")})})), W("c"));
  EXPECT_EQ(normalize_affine(L("q")), W("q"));
}

TEST(NormalizeAffine, MiddleArgumentIsNegated) {
  const auto e = HeapExpr::node({L("a"), HeapExpr::node({L("b"), L("c"), L("d")}), L("e")});
  EXPECT_EQ(normalize_affine(e).vector(), terms({{"a", 1}, {"b", -1}, {"c", 1}, {"d", -1}, {"e", 1}}));
}

TEST(NormalizeAffine, RejectsEvenArity) {
  EXPECT_THROW(normalize_affine(HeapExpr::node({L("a"), L("b")})), Error);
  EXPECT_THROW(normalize_affine(HeapExpr::node({L("a"), HeapExpr::node({L("b"), L("c")}), L("d")})), Error);
}

TEST(AffineWord, CoefficientSumInvariants) {
  EXPECT_THROW(AffineWord(terms({{"a", 1}, {"b", 1}})), Error);
  EXPECT_THROW(AffineWord(LinearCombination{}), Error);
  EXPECT_THROW(RelationVector(terms({{"a", 1}})), Error);
  EXPECT_NO_THROW(RelationVector(terms({{"a", 2}, {"b", -2}})));
  EXPECT_TRUE(RelationVector::from_bracket("x"_g, "x"_g, "y"_g, "y"_g).is_zero());
}

TEST(WordEqual, Examples) {
  const auto p = one_square();
  EXPECT_TRUE(word_equal(p, W("x"), W("x")));
  const auto wzy = normalize_affine(HeapExpr::node({L("w"), L("z"), L("y")}));
  EXPECT_TRUE(word_equal(p, wzy, W("x")));
  const AbelianHeapPresentation free(labels({"x", "y"}), {});
  EXPECT_FALSE(word_equal(free, W("x"), W("y")));
}

TEST(WordEqual, UnknownGenerator) {
  EXPECT_THROW(word_equal(one_square(), W("x"), W("nope")), Error);
}

TEST(Presentation, ConstructionErrors) {
  EXPECT_THROW(AbelianHeapPresentation({}, {}), Error);
  EXPECT_THROW(AbelianHeapPresentation(labels({"a", "a"}), {}), Error);
  EXPECT_THROW(AbelianHeapPresentation(labels({"a"}), {RelationVector::from_bracket("a"_g, "b"_g, "a"_g, "a"_g)}), Error);
}

TEST(RetractGroupStructure, FreeOnTwoGenerators) {
  const AbelianHeapPresentation p(labels({"e", "a"}), {});
  const auto g = retract_group_structure(p, "e"_g);
  EXPECT_EQ(g.invariants(), (InvariantFactors{1, {}}));
  EXPECT_EQ(g.class_coordinates("e"_g), std::vector<Integer>{0});
  EXPECT_EQ(abs(g.class_coordinates("a"_g)[0]), 1);
}

TEST(RetractGroupStructure, TwoTorsion) {
  // 2a - 2e
  const AbelianHeapPresentation p(labels({"e", "a"}), {RelationVector(terms({{"a", 2}, {"e", -2}}))});
  const auto g = retract_group_structure(p, "e"_g);
  EXPECT_EQ(g.invariants(), (InvariantFactors{0, {2}}));
  EXPECT_EQ(g.class_coordinates("a"_g), std::vector<Integer>{1});
  EXPECT_EQ(g.class_coordinates("e"_g), std::vector<Integer>{0});
}

TEST(RetractGroupStructure, FiniteSets) {
  const auto g = retract_group_structure(k0_presentation(finite_sets_spec(8)), set_label(0));
  EXPECT_EQ(g.invariants(), (InvariantFactors{1, {}}));
}

TEST(RetractGroupStructure, Errors) {
  EXPECT_THROW(retract_group_structure(one_square(), "q"_g), Error);
  const auto g = retract_group_structure(one_square(), "x"_g);
  EXPECT_THROW(g.coordinates(W("q")), Error);
}

TEST(RetractGroupStructure, SingleGeneratorIsTrivial) {
  const AbelianHeapPresentation p(labels({"o"}), {});
  const auto g = retract_group_structure(p, "o"_g);
  EXPECT_TRUE(g.invariants().trivial());
  EXPECT_TRUE(g.class_coordinates("o"_g).empty());
}

TEST(InducedMorphism, Identity) {
  const auto p = one_square();
  std::map<GeneratorLabel, AffineWord> id;
  for (const auto& g : p.generators()) id.emplace(g, AffineWord(g));
  const auto v = induced_morphism(p, p, id);
  EXPECT_TRUE(v.holds);
  ASSERT_TRUE(v.morphism.has_value());
  const auto w = normalize_affine(HeapExpr::node({L("x"), L("y"), L("z")}));
  EXPECT_EQ(v.morphism->apply(w), w);
}

TEST(InducedMorphism, FiniteSetInclusion) {
  const auto small = k0_presentation(finite_sets_spec(3));
  const auto large = k0_presentation(finite_sets_spec(5));
  std::map<GeneratorLabel, AffineWord> inclusion;
  for (const auto& g : small.generators()) inclusion.emplace(g, AffineWord(g));
  EXPECT_TRUE(induced_morphism(small, large, inclusion).holds);
}

TEST(InducedMorphism, ViolationWitness) {
  const auto src = one_square();
  const AbelianHeapPresentation dst(src.generators(), {});
  std::map<GeneratorLabel, AffineWord> inclusion;
  for (const auto& g : src.generators()) inclusion.emplace(g, AffineWord(g));
  const auto v = induced_morphism(src, dst, inclusion);
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(*v.witness, src.relations()[0]);
  EXPECT_FALSE(dst.in_relation_lattice(v.witness->vector()));
}

TEST(InducedMorphism, PartialMapRejected) {
  const auto p = one_square();
  EXPECT_THROW(induced_morphism(p, p, {{"x"_g, W("x")}}), Error);
}

TEST(TrussFromTable, FiniteSets) {
  const auto spec = finite_sets_spec(8);
  const auto p = k0_presentation(spec);
  const auto check = truss_from_table(p, spec.truss_table(), TableCoverage::truncated);
  ASSERT_TRUE(check.ok);
  EXPECT_FALSE(check.omitted_pairs.empty());
  EXPECT_GT(check.ideal_checks, 0u);
  EXPECT_TRUE(check.associative);
  ASSERT_TRUE(check.unit_law.has_value());
  EXPECT_TRUE(*check.unit_law);

  const auto g = retract_group_structure(p, set_label(0)).oriented(AffineWord(set_label(1)));
  for (std::size_t m = 0; m <= 8; ++m)
    for (std::size_t n = 0; m * n <= 8 && n <= 8; ++n) {
      const auto prod = truss_product(*check.truss, AffineWord(set_label(m)), AffineWord(set_label(n)));
      EXPECT_EQ(g.coordinates(prod), std::vector<Integer>{static_cast<long long>(m * n)});
    }
  // 1 is the singleton class and acts as the unit.
  EXPECT_EQ(truss_product(*check.truss, AffineWord(set_label(1)), AffineWord(set_label(5))), AffineWord(set_label(5)));
  EXPECT_EQ(truss_product(*check.truss, AffineWord(set_label(2)), AffineWord(set_label(3))), AffineWord(set_label(6)));
}

TEST(TrussFromTable, CompleteCoverageRequiresEveryPair) {
  const auto spec = finite_sets_spec(3);
  EXPECT_THROW(truss_from_table(k0_presentation(spec), spec.truss_table()), Error);
}

// Generators e, a, b with [a, e, a] = b; left multiplication by a maps the
// relation 2a - e - b to a - e, which is not in the lattice.
TEST(TrussFromTable, IdealViolation) {
  const AbelianHeapPresentation p(labels({"e", "a", "b"}), {RelationVector(terms({{"a", 2}, {"e", -1}, {"b", -1}}))});
  TrussTable t;
  for (const auto* x : {"e", "b"})
    for (const auto* g : {"e", "a", "b"}) t.product.insert_or_assign({GeneratorLabel(x), GeneratorLabel(g)}, W(g));
  t.product.insert_or_assign({"a"_g, "e"_g}, W("e"));
  t.product.insert_or_assign({"a"_g, "a"_g}, W("a"));
  t.product.insert_or_assign({"a"_g, "b"_g}, W("a"));
  const auto check = truss_from_table(p, t);
  ASSERT_FALSE(check.ok);
  ASSERT_TRUE(check.violation.has_value());
  EXPECT_EQ(check.violation->relation_index, 0u);
  EXPECT_EQ(check.violation->side, Side::left);
  EXPECT_EQ(check.violation->generator, "a"_g);
  EXPECT_FALSE(check.truss);
  EXPECT_FALSE(p.in_relation_lattice(terms({{"a", 1}, {"e", -1}})));
}

TEST(TrussFromTable, UnknownLabels) {
  const auto p = one_square();
  TrussTable t;
  t.product.insert_or_assign({"x"_g, "zz"_g}, W("x"));
  EXPECT_THROW(truss_from_table(p, t, TableCoverage::truncated), Error);
}

TEST(TrussProduct, GeneratorEntryAndBracket) {
  // Z/5 as a ring on five generators, no relations: the table is bilinear
  // on the nose, so products are checked by vector equality and word_equal.
  std::vector<GeneratorLabel> gens;
  for (int i = 0; i < 5; ++i) gens.emplace_back(std::to_string(i));
  const AbelianHeapPresentation p(gens, {});
  TrussTable t;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) t.product.insert_or_assign({gens[i], gens[j]}, AffineWord(gens[(i * j) % 5]));
  const auto check = truss_from_table(p, t);
  ASSERT_TRUE(check.ok);
  const auto& truss = *check.truss;
  EXPECT_EQ(truss_product(truss, W("2"), W("3")), W("1"));
  const auto abc = normalize_affine(HeapExpr::node({L("1"), L("2"), L("4")}));
  const auto lhs = truss_product(truss, abc, W("3"));
  const auto rhs = bracket(truss_product(truss, W("1"), W("3")), truss_product(truss, W("2"), W("3")),
                           truss_product(truss, W("4"), W("3")));
  EXPECT_TRUE(word_equal(p, lhs, rhs));
  EXPECT_THROW(truss_product(truss, W("1"), W("9")), Error);
}

// Random affine word over gens with small coefficients.
AffineWord random_affine(std::mt19937_64& rng, const std::vector<GeneratorLabel>& gens) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  LinearCombination v;
  for (int i = 0; i < 3; ++i) v.add(gens[pick(rng)], coef(rng));
  v.add(gens[pick(rng)], 1 - v.sum());
  return AffineWord(std::move(v));
}

TEST(PresentationProperty, WordEqualIsAnEquivalence) {
  // Z/3 + Z on generators o, a, b, c: 3a = 3o, c = [a, o, b].
  const AbelianHeapPresentation p(labels({"o", "a", "b", "c"}),
                                  {RelationVector(terms({{"a", 3}, {"o", -3}})),
                                   RelationVector::from_bracket("a"_g, "o"_g, "b"_g, "c"_g)});
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const auto x = random_affine(rng, p.generators());
    const auto y = random_affine(rng, p.generators());
    const auto z = random_affine(rng, p.generators());
    EXPECT_TRUE(word_equal(p, x, x));
    EXPECT_EQ(word_equal(p, x, y), word_equal(p, y, x));
    if (word_equal(p, x, y) && word_equal(p, y, z)) {
      EXPECT_TRUE(word_equal(p, x, z));
    }
  }
  // Words equal to a shifted copy, to exercise the transitive case.
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = random_affine(rng, p.generators());
    const auto y = AffineWord(x.vector() + terms({{"a", 3}, {"o", -3}}));
    const auto z = AffineWord(y.vector() + terms({{"a", 1}, {"o", -1}, {"b", 1}, {"c", -1}}));
    EXPECT_TRUE(word_equal(p, x, y));
    EXPECT_TRUE(word_equal(p, y, z));
    EXPECT_TRUE(word_equal(p, x, z));
  }
}

TEST(PresentationProperty, CoordinatesRespectBracket) {
  const AbelianHeapPresentation p(labels({"o", "a", "b", "c"}),
                                  {RelationVector(terms({{"a", 4}, {"o", -4}})), RelationVector(terms({{"b", 6}, {"c", -6}}))});
  const auto g = retract_group_structure(p, "o"_g);
  ASSERT_EQ(g.invariants().torsion, (std::vector<Integer>{2, 12}));
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_affine(rng, p.generators());
    const auto b = random_affine(rng, p.generators());
    const auto c = random_affine(rng, p.generators());
    const auto lhs = g.coordinates(bracket(a, b, c));
    const auto ca = g.coordinates(a), cb = g.coordinates(b), cc = g.coordinates(c);
    for (std::size_t i = 0; i < g.dimension(); ++i) {
      Integer expect = ca[i] - cb[i] + cc[i];
      if (i >= g.invariants().rank) {
        const auto& d = g.invariants().torsion[i - g.invariants().rank];
        expect %= d;
        if (expect < 0) expect += d;
      }
      EXPECT_EQ(lhs[i], expect);
    }
    // Constant on equality classes.
    const auto shifted = AffineWord(a.vector() + terms({{"b", 6}, {"c", -6}}));
    EXPECT_EQ(g.coordinates(shifted), ca);
    EXPECT_EQ(g.coordinates(AffineWord("o"_g)), std::vector<Integer>(g.dimension(), 0));
  }
}

TEST(PresentationProperty, BracketFromRetractIsTheSameVector) {
  // [a, b, c] = a -_e b +_e c where x +_e y = [x, e, y] and -_e y = [e, y, e].
  std::mt19937_64 rng(47);
  const auto gens = labels({"e", "p", "q", "r"});
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_affine(rng, gens), b = random_affine(rng, gens), c = random_affine(rng, gens);
    const auto e = random_affine(rng, gens);
    auto plus = [&](const AffineWord& x, const AffineWord& y) { return bracket(x, e, y); };
    auto neg = [&](const AffineWord& y) { return bracket(e, y, e); };
    EXPECT_EQ(bracket(a, b, c), plus(plus(a, neg(b)), c));
  }
}

TEST(PresentationProperty, TrussDistributivity) {
  const auto spec = finite_sets_spec(8);
  const auto check = truss_from_table(k0_presentation(spec), spec.truss_table(), TableCoverage::truncated);
  ASSERT_TRUE(check.ok);
  const auto& t = *check.truss;
  const auto& p = t.presentation();
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<std::size_t> small(0, 2), any(0, 8);
  int tested = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto x = AffineWord(set_label(small(rng)));
    const auto a = AffineWord(set_label(any(rng))), b = AffineWord(set_label(any(rng))), c = AffineWord(set_label(any(rng)));
    const auto abc = bracket(a, b, c);
    auto lhs = t.try_product(x.vector(), abc.vector());
    auto xa = t.try_product(x.vector(), a.vector()), xb = t.try_product(x.vector(), b.vector()),
         xc = t.try_product(x.vector(), c.vector());
    if (!lhs || !xa || !xb || !xc) continue;
    ++tested;
    EXPECT_TRUE(word_equal(p, AffineWord(*lhs), bracket(AffineWord(*xa), AffineWord(*xb), AffineWord(*xc))));
  }
  EXPECT_GT(tested, 50);
}

}  // namespace
}  // namespace k0
