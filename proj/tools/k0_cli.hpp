#pragma once

// Command-line front end. Exit codes: 0 success, 1 engine-level failure
// (a failed check or a rejected computation), 2 usage or parse errors.

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "k0heap/k0heap.hpp"

namespace k0::cli {

namespace detail {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Prints diagnostics; throws UsageError when any of them is an error.
template <class T>
T take(Parsed<T> parsed, const SpecSource& src, std::ostream& err) {
  for (const auto& d : parsed.diagnostics) err << format_diagnostic(src, d);
  if (!parsed.ok()) throw UsageError(src.name + ": " + std::to_string(parsed.error_count()) + " error(s)");
  return std::move(*parsed.value);
}

inline CategorySpec load_spec(const std::string& path, std::ostream& err) {
  const SpecSource src{read_file(path), path};
  return take(parse_spec(src), src, err);
}

inline AffineWord load_word(const std::string& text, std::ostream& err) {
  const SpecSource src{text, "word"};
  return normalize_affine(take(parse_word(text), src, err));
}

inline GeneratorLabel label_arg(const std::string& text) {
  if (!is_valid_label(text)) throw UsageError("invalid label '" + text + "'");
  return GeneratorLabel(text);
}

inline void add_relations(Report& r, const AbelianHeapPresentation& p) {
  std::string gens;
  for (const auto& g : p.generators()) gens += (gens.empty() ? "" : " ") + g.name();
  r.field("generators", gens);
  r.field("relations", std::to_string(p.relations().size()));
  for (std::size_t i = 0; i < p.relations().size(); ++i) {
    r.field("relation." + std::to_string(i + 1), to_string(p.relations()[i]));
  }
}

inline void add_truss(Report& r, const TrussCheck& check) {
  r.field("truss", check.ok ? "ok" : "violation");
  if (check.violation) {
    const auto& v = *check.violation;
    r.field("violation.relation", to_string(v.relation));
    r.field("violation.side", to_string(v.side));
    r.field("violation.generator", v.generator.name());
  }
  r.field("ideal_checks", std::to_string(check.ideal_checks));
  r.field("ideal_skipped", std::to_string(check.ideal_skipped));
  if (check.ok) {
    r.field("associative", to_string(check.associative));
    if (check.unit_law) r.field("unit_law", to_string(*check.unit_law));
  }
  std::string omitted;
  for (const auto& [a, b] : check.omitted_pairs) omitted += (omitted.empty() ? "" : " ") + a.name() + "*" + b.name();
  r.field("omitted", std::to_string(check.omitted_pairs.size()));
  if (!check.omitted_pairs.empty()) r.field("omitted_pairs", omitted);
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grothendieck heaps and trusses of finite category descriptions", "k0"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format_name = "human";
  app.add_option("--format", format_name, "Output format")->check(CLI::IsMember({"human", "structured"}));

  std::string file, dst_file, map_file, base, orient, word1, word2, convention = "paper";
  std::size_t bound = 0;
  bool print_only = false;

  auto* present = app.add_subcommand("present", "Print the heap presentation of a spec");
  present->add_option("FILE", file)->required();

  auto* group = app.add_subcommand("group", "Retract group of the heap at a basepoint");
  group->add_option("FILE", file)->required();
  group->add_option("--base", base, "Basepoint object")->required();
  group->add_option("--orient", orient, "Object whose free coordinates are made nonnegative");

  auto* equal = app.add_subcommand("equal", "Decide equality of two bracket words");
  equal->add_option("FILE", file)->required();
  equal->add_option("W1", word1)->required();
  equal->add_option("W2", word2)->required();

  auto* truss = app.add_subcommand("truss-check", "Check that the product table descends to the heap");
  truss->add_option("FILE", file)->required();

  auto* project = app.add_subcommand("project", "Compare the split presentation with the full one");
  project->add_option("FILE", file)->required();

  auto* morphism = app.add_subcommand("morphism", "Check the heap morphism induced by an object map");
  morphism->add_option("SRC", file)->required();
  morphism->add_option("DST", dst_file)->required();
  morphism->add_option("MAPFILE", map_file)->required();

  auto* reduce = app.add_subcommand("reduce", "Normal form of a free heap word");
  reduce->add_option("WORD", word1)->required();

  app.add_subcommand("snf", "Invariant factors of Z^n / rowspan(M), matrix on standard input");

  auto* demo = app.add_subcommand("demo", "Built-in example categories");
  demo->require_subcommand(1);
  auto* demo_set = demo->add_subcommand("set", "Finite sets up to size N");
  auto* demo_vect = demo->add_subcommand("vect", "Vector spaces up to dimension N");
  auto* demo_swindle = demo->add_subcommand("swindle", "Vector spaces with an absorbing object");
  for (auto* d : {demo_set, demo_vect, demo_swindle}) {
    d->add_option("N", bound)->required()->check(CLI::Range(1, 64));
  }
  auto* demo_cw = demo->add_subcommand("cw", "Class of a CW complex from its cell counts");
  demo_cw->add_option("FILE", file)->required();
  demo_cw->add_option("--convention", convention, "Sphere attached to D^k: paper (S^k) or standard (S^(k-1))")
      ->check(CLI::IsMember({"paper", "standard"}));
  auto* demo_zmod = demo->add_subcommand("zmod", "Finitely generated abelian groups sample");
  for (auto* d : {demo_set, demo_vect, demo_swindle, demo_zmod}) {
    d->add_flag("--print-spec", print_only, "Print the generated spec instead of analysing it");
  }

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "k0: " << e.what() << "\n" << app.help();
    return 2;
  }

  const auto format = format_name == "structured" ? OutputFormat::structured : OutputFormat::human;
  Report report;
  int status = 0;

  try {
    if (present->parsed()) {
      const auto spec = detail::load_spec(file, err);
      const auto summary = k0_relations(spec);
      report.field("command", "present");
      report.field("objects", std::to_string(spec.objects.size()));
      report.field("trivial", std::to_string(summary.trivial));
      report.field("excluded", std::to_string(summary.excluded));
      detail::add_relations(report, AbelianHeapPresentation(spec.objects, summary.relations));
    } else if (group->parsed()) {
      const auto spec = detail::load_spec(file, err);
      auto g = k0_group(spec, detail::label_arg(base));
      if (!orient.empty()) g = g.oriented(AffineWord(detail::label_arg(orient)));
      report.field("command", "group");
      add_group(report, "", g, spec.objects);
    } else if (equal->parsed()) {
      const auto spec = detail::load_spec(file, err);
      const auto p = k0_presentation(spec);
      const auto a = detail::load_word(word1, err);
      const auto b = detail::load_word(word2, err);
      report.field("command", "equal");
      report.field("left", to_string(a));
      report.field("right", to_string(b));
      report.field("equal", to_string(word_equal(p, a, b)));
    } else if (truss->parsed()) {
      const auto spec = detail::load_spec(file, err);
      if (!spec.has_product()) throw Error("spec has no product table");
      const auto check = truss_from_table(k0_presentation(spec), spec.truss_table(), TableCoverage::truncated);
      report.field("command", "truss-check");
      detail::add_truss(report, check);
      if (!check.ok) status = 1;
    } else if (project->parsed()) {
      const auto spec = detail::load_spec(file, err);
      const auto split = split_presentation(spec);
      const auto full = k0_presentation(spec);
      const auto v = compare_projection(split, full);
      report.field("command", "project");
      report.field("contained", to_string(v.contained));
      report.field("equal", to_string(v.equal));
      report.field("projection", !v.contained ? "undefined" : v.equal ? "isomorphism" : "non-identity projection");
      if (v.containment_witness) report.field("containment_witness", to_string(*v.containment_witness));
      if (v.strictness_witness) report.field("strictness_witness", to_string(*v.strictness_witness));
      add_group(report, "split.", retract_group_structure(split, *spec.zero), {});
      add_group(report, "full.", retract_group_structure(full, *spec.zero), {});
      if (!v.contained) status = 1;
    } else if (morphism->parsed()) {
      FunctorSpec f{detail::load_spec(file, err), detail::load_spec(dst_file, err), {}};
      const SpecSource map_src{detail::read_file(map_file), map_file};
      f.object_map = detail::take(parse_object_map(map_src), map_src, err);
      const auto v = functor_induced(f);
      report.field("command", "morphism");
      report.field("heap_morphism", to_string(v.heap.holds));
      if (v.heap.witness) report.field("witness", to_string(*v.heap.witness));
      if (v.truss) {
        report.field("truss_morphism", to_string(v.truss->holds));
        report.field("products_checked", std::to_string(v.truss->checked));
        report.field("products_unverified", std::to_string(v.truss->unverified.size()));
        report.field("unit_preserved", to_string(v.truss->unit_preserved));
        if (v.truss->witness) {
          const auto& e = *v.truss->witness;
          report.field("truss_witness", e.left.name() + " * " + e.right.name() + " = " + e.result.name());
        }
      }
      if (!v.heap.holds || (v.truss && !v.truss->holds)) status = 1;
    } else if (reduce->parsed()) {
      const SpecSource src{word1, "word"};
      const auto w = reduce_word(flatten(detail::take(parse_word(word1), src, err)));
      report.field("command", "reduce");
      report.field("word", to_string(w));
    } else if (app.got_subcommand("snf")) {
      const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
      const SpecSource src{text, "<stdin>"};
      const auto f = snf(detail::take(parse_matrix(text), src, err));
      report.field("command", "snf");
      report.field("rank", std::to_string(f.rank));
      report.field("torsion", join_integers(f.torsion), f.torsion.empty() ? "none" : join_integers(f.torsion, ", "));
      report.field("group", to_string(f));
    } else if (demo_cw->parsed()) {
      const SpecSource src{detail::read_file(file), file};
      const auto c = detail::take(parse_cw_counts(src), src, err);
      const auto conv = convention == "paper" ? CellConvention::paper : CellConvention::standard;
      const auto word = cw_word(c, conv);
      const auto cls = cw_class(c, conv);
      report.field("command", "demo-cw");
      report.field("convention", convention);
      report.field("dimension", std::to_string(c.dimension()));
      report.field("word", to_string(word));
      report.field("class", to_string(cls));
      report.field("consistent", to_string(normalize_affine(word) == cls));
    } else {
      CategorySpec spec;
      std::string name;
      if (demo_set->parsed()) {
        spec = finite_sets_spec(bound);
        name = "set";
      } else if (demo_vect->parsed()) {
        spec = vect_spec(bound);
        name = "vect";
      } else if (demo_swindle->parsed()) {
        spec = swindle_spec(bound);
        name = "swindle";
      } else {
        spec = bounded_abelian_groups_file();
        name = "zmod";
      }
      if (print_only) {
        out << (name == "zmod" ? std::string(kBoundedAbelianGroups) : print_spec(spec));
        return 0;
      }
      report.field("command", "demo-" + name);
      const auto full = k0_presentation(spec);
      report.field("objects", std::to_string(spec.objects.size()));
      report.field("relations", std::to_string(full.relations().size()));
      const auto base_label = spec.zero ? *spec.zero : set_label(0);
      if (name == "set") {
        add_group(report, "", retract_group_structure(full, base_label).oriented(AffineWord(set_label(1))),
                  spec.objects);
        detail::add_truss(report, truss_from_table(full, spec.truss_table(), TableCoverage::truncated));
      } else if (name == "swindle") {
        add_group(report, "", retract_group_structure(full, base_label), {});
        bool collapsed = true;
        for (const auto& o : spec.objects) collapsed = collapsed && word_equal(full, AffineWord(o), AffineWord(base_label));
        report.field("collapsed", to_string(collapsed));
      } else {
        const auto split = split_presentation(spec);
        const auto v = compare_projection(split, full);
        const auto watched = name == "zmod" ? std::vector<GeneratorLabel>{GeneratorLabel("Z"), GeneratorLabel("Z/2")}
                                            : std::vector<GeneratorLabel>{dimension_label(1)};
        add_group(report, "full.", retract_group_structure(full, base_label), watched);
        add_group(report, "split.", retract_group_structure(split, base_label), watched);
        report.field("contained", to_string(v.contained));
        report.field("equal", to_string(v.equal));
        report.field("projection", !v.contained ? "undefined" : v.equal ? "isomorphism" : "non-identity projection");
      }
    }
  } catch (const detail::UsageError& e) {
    err << "k0: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "k0: error: " << e.what() << "\n";
    return 1;
  }

  report.write(out, format);
  return status;
}

}  // namespace k0::cli
