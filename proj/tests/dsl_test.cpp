#include "k0heap/dsl.hpp"

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "gtest/gtest.h"
#include "k0heap/instances.hpp"

namespace k0 {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> cat_files(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".cat") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<fs::path> valid_corpus() {
  auto out = cat_files(K0_DATA_DIR);
  for (auto& p : cat_files(fs::path(K0_TESTS_DIR) / "data" / "valid")) out.push_back(p);
  return out;
}

CategorySpec parse_ok(const std::string& text) {
  auto p = parse_spec(text);
  EXPECT_TRUE(p.ok()) << (p.diagnostics.empty() ? "" : p.diagnostics[0].message);
  return p.ok() ? *p.value : CategorySpec{};
}

TEST(ParseSpec, DuplicateObject) {
  const auto p = parse_spec("object A\nobject A\n");
  ASSERT_FALSE(p.ok());
  ASSERT_EQ(p.diagnostics.size(), 1u);
  EXPECT_EQ(p.diagnostics[0].line, 2u);
  EXPECT_EQ(p.diagnostics[0].column, 8u);
  EXPECT_NE(p.diagnostics[0].message.find("duplicate object"), std::string::npos);
}

TEST(ParseSpec, DemoFileMatchesGenerator) {
  const auto p = parse_spec(SpecSource{slurp(fs::path(K0_DATA_DIR) / "demo_set3.cat"), "demo_set3.cat"});
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(*p.value, finite_sets_spec(3));
  EXPECT_EQ(p.value->objects, finite_sets_spec(3).objects);
}

TEST(ParseSpec, DemoFilesMatchGenerators) {
  const fs::path d = K0_DATA_DIR;
  EXPECT_EQ(parse_ok(slurp(d / "demo_set5.cat")), finite_sets_spec(5));
  EXPECT_EQ(parse_ok(slurp(d / "demo_set8.cat")), finite_sets_spec(8));
  EXPECT_EQ(parse_ok(slurp(d / "demo_vect4.cat")), vect_spec(4));
  EXPECT_EQ(parse_ok(slurp(d / "demo_swindle3.cat")), swindle_spec(3));
}

TEST(ParseSpec, UnflaggedPushoutWarns) {
  const auto p = parse_spec("object X\nobject Y\nobject Z\nobject W\npushout Y -> X, Y -> Z => W\n");
  ASSERT_TRUE(p.ok());
  ASSERT_EQ(p.diagnostics.size(), 1u);
  EXPECT_EQ(p.diagnostics[0].severity, Severity::warning);
  EXPECT_EQ(p.diagnostics[0].line, 5u);
  EXPECT_EQ(p.diagnostics[0].column, 1u);
  EXPECT_NE(p.diagnostics[0].message.find("monomorphic leg"), std::string::npos);
  ASSERT_EQ(p.value->pushouts.size(), 1u);
  EXPECT_TRUE(k0_presentation(*p.value).relations().empty());
}

TEST(ParseSpec, MonoFlags) {
  EXPECT_FALSE(parse_spec("object X\nobject Y\npushout Y->X, Y -> X [mono] => X\n").ok());
  const auto t = parse_ok("object X\nobject Y\npushout Y -> X, Y -> X [ mono ] => X\n");
  ASSERT_EQ(t.pushouts.size(), 1u);
  EXPECT_FALSE(t.pushouts[0].left_mono);
  EXPECT_TRUE(t.pushouts[0].right_mono);
}

TEST(ParseSpec, Comments) {
  const auto s = parse_ok("# header\nobject A # trailing\n   # indented\n\nobject B\n");
  EXPECT_EQ(s.objects.size(), 2u);
}

TEST(ParseSpec, ErrorsNeverYieldAValue) {
  for (const auto* text : {"object", "zero", "object A\nzero A\nzero A\n", "sum A + A = A\n", "product\n", "pushout\n"}) {
    const auto p = parse_spec(text);
    EXPECT_FALSE(p.ok()) << text;
    EXPECT_GT(p.error_count(), 0u) << text;
  }
}

TEST(ParseSpec, AllErrorsAreReported) {
  const auto p = parse_spec("object A\nfoo\nobject A\nsum A + Q = A\n");
  ASSERT_EQ(p.error_count(), 3u);
  EXPECT_EQ(p.diagnostics[0].line, 2u);
  EXPECT_EQ(p.diagnostics[1].line, 3u);
  EXPECT_EQ(p.diagnostics[2].line, 4u);
  EXPECT_EQ(p.diagnostics[2].column, 9u);
}

TEST(ParseSpec, DiagnosticFormat) {
  const SpecSource src{"object A\nobject A\n", "x.cat"};
  const auto p = parse_spec(src);
  ASSERT_FALSE(p.diagnostics.empty());
  EXPECT_EQ(format_diagnostic(src, p.diagnostics[0]),
            "x.cat:2:8: error: duplicate object 'A' (first declared on line 1)\n  object A\n         ^\n");
}

TEST(PrintSpec, RoundTrip) {
  for (const auto& s : {finite_sets_spec(3), vect_spec(5), swindle_spec(2), bounded_abelian_groups_file()}) {
    const auto text = print_spec(s);
    const auto back = parse_ok(text);
    EXPECT_EQ(back, s);
    EXPECT_EQ(print_spec(back), text);
  }
}

TEST(PrintSpec, EmptyAndProducts) {
  EXPECT_EQ(print_spec(CategorySpec{}), std::string(kSpecHeader));
  EXPECT_EQ(parse_ok(print_spec(CategorySpec{})), CategorySpec{});

  const auto text = print_spec(finite_sets_spec(3));
  EXPECT_NE(text.find("product 2 * 1 = 2\n"), std::string::npos);
  EXPECT_NE(text.find("unit 1\n"), std::string::npos);
  EXPECT_EQ(text.rfind(std::string(kSpecHeader), 0), 0u);
}

TEST(PrintSpec, Deterministic) {
  auto s = finite_sets_spec(4);
  const auto a = print_spec(s);
  std::reverse(s.pushouts.begin(), s.pushouts.end());
  std::reverse(s.products.begin(), s.products.end());
  EXPECT_EQ(print_spec(s), a);
}

TEST(Corpus, ValidFilesRoundTrip) {
  const auto files = valid_corpus();
  ASSERT_GE(files.size(), 10u);
  for (const auto& f : files) {
    const auto first = parse_spec(SpecSource{slurp(f), f.filename().string()});
    ASSERT_TRUE(first.ok()) << f;
    const auto printed = print_spec(*first.value);
    const auto second = parse_spec(printed);
    ASSERT_TRUE(second.ok()) << f;
    EXPECT_EQ(*second.value, *first.value) << f;
    EXPECT_EQ(print_spec(*second.value), printed) << f;
  }
}

TEST(Corpus, MalformedFilesPointAtTheFirstBadToken) {
  const auto files = cat_files(fs::path(K0_TESTS_DIR) / "data" / "malformed");
  ASSERT_GE(files.size(), 10u);
  const std::regex expect_line(R"(# expect: (\d+):(\d+))");
  for (const auto& f : files) {
    const auto text = slurp(f);
    std::smatch m;
    ASSERT_TRUE(std::regex_search(text, m, expect_line)) << f;
    const auto p = parse_spec(SpecSource{text, f.filename().string()});
    EXPECT_FALSE(p.ok()) << f;
    const auto first = std::find_if(p.diagnostics.begin(), p.diagnostics.end(),
                                    [](const Diagnostic& d) { return d.severity == Severity::error; });
    ASSERT_NE(first, p.diagnostics.end()) << f;
    EXPECT_EQ(first->line, std::stoul(m[1])) << f << ": " << first->message;
    EXPECT_EQ(first->column, std::stoul(m[2])) << f << ": " << first->message;
  }
}

TEST(ParseWord, Examples) {
  const auto p = parse_word("[a, [b,c,d] ,e]");
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(to_string(*p.value), "[a,[b,c,d],e]");
  EXPECT_EQ(to_string(*parse_word("  x ").value), "x");
}

TEST(ParseWord, Errors) {
  auto col = [](std::string_view w) {
    const auto p = parse_word(w);
    EXPECT_FALSE(p.ok()) << w;
    return p.diagnostics.empty() ? 0 : p.diagnostics[0].column;
  };
  EXPECT_EQ(col("[a,b]"), 1u);
  EXPECT_EQ(col("[x,[a,b],y]"), 4u);
  EXPECT_EQ(col("[a,b,c"), 1u);
  EXPECT_EQ(col("[a,,c]"), 4u);
  EXPECT_EQ(col("a b"), 3u);
  EXPECT_EQ(col(""), 1u);
  EXPECT_EQ(col("[a,b=c,d]"), 4u);
}

TEST(ParseObjectMap, ExamplesAndErrors) {
  const auto ok = parse_object_map(SpecSource{"map A -> B\nmap B -> B # note\n"});
  ASSERT_TRUE(ok.ok());
  EXPECT_EQ(ok.value->at("A"_g), "B"_g);

  const auto dup = parse_object_map(SpecSource{"map A -> B\nmap A -> C\n"});
  ASSERT_FALSE(dup.ok());
  EXPECT_EQ(dup.diagnostics[0].line, 2u);
  EXPECT_EQ(dup.diagnostics[0].column, 5u);

  const auto bad = parse_object_map(SpecSource{"map A B\n"});
  ASSERT_FALSE(bad.ok());
  EXPECT_EQ(bad.diagnostics[0].column, 7u);

  EXPECT_FALSE(parse_object_map(SpecSource{"object A\n"}).ok());
}

TEST(ParseMatrix, ExamplesAndErrors) {
  const auto ok = parse_matrix("1 -2\n+3 4\n\n");
  ASSERT_TRUE(ok.ok());
  EXPECT_EQ(ok.value->rows(), 2u);
  EXPECT_EQ((*ok.value)(0, 1), -2);
  EXPECT_EQ((*ok.value)(1, 0), 3);

  const auto big = parse_matrix("123456789012345678901234567890\n");
  ASSERT_TRUE(big.ok());
  EXPECT_EQ((*big.value)(0, 0), Integer("123456789012345678901234567890"));

  const auto ragged = parse_matrix("1 2\n3\n");
  ASSERT_FALSE(ragged.ok());
  EXPECT_EQ(ragged.diagnostics[0].line, 2u);

  const auto junk = parse_matrix("1 x\n");
  ASSERT_FALSE(junk.ok());
  EXPECT_EQ(junk.diagnostics[0].column, 3u);
  EXPECT_FALSE(parse_matrix("-\n").ok());
}

}  // namespace
}  // namespace k0
