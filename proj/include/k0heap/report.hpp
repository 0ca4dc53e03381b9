#pragma once

// Output documents. The structured form is a versioned key/value listing:
//
//   k0-format 1
//   key=value
//   ...
//
// Keys never contain '='; list values are space separated. The human form
// prints the same fields as "key: value" plus free-text notes.

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "k0heap/lattice.hpp"
#include "k0heap/presentation.hpp"

namespace k0 {

enum class OutputFormat { human, structured };

inline constexpr const char* kFormatHeader = "k0-format 1";

class Report {
 public:
  void field(std::string key, std::string value) { items_.emplace_back(Field{std::move(key), std::move(value), {}}); }
  void field(std::string key, std::string value, std::string human) {
    items_.emplace_back(Field{std::move(key), std::move(value), std::move(human)});
  }
  void note(std::string text) { items_.emplace_back(Note{std::move(text)}); }

  void write(std::ostream& out, OutputFormat format) const {
    if (format == OutputFormat::structured) out << kFormatHeader << '\n';
    for (const auto& item : items_) {
      if (const auto* f = std::get_if<Field>(&item)) {
        if (format == OutputFormat::structured) {
          out << f->key << '=' << f->value << '\n';
        } else {
          out << f->key << ": " << (f->human.empty() ? f->value : f->human) << '\n';
        }
      } else if (format == OutputFormat::human) {
        out << std::get<Note>(item).text << '\n';
      }
    }
  }

 private:
  struct Field {
    std::string key;
    std::string value;
    std::string human;
  };
  struct Note {
    std::string text;
  };
  std::vector<std::variant<Field, Note>> items_;
};

inline std::string join_integers(const std::vector<Integer>& v, const char* sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i].str();
  }
  return out;
}

inline std::string format_coordinates(const std::vector<Integer>& v) { return "(" + join_integers(v, ", ") + ")"; }

inline const char* to_string(bool b) { return b ? "true" : "false"; }

// rank, torsion, group and one coordinate line per listed class.
inline void add_group(Report& r, const std::string& prefix, const GroupStructure& g,
                      const std::vector<GeneratorLabel>& classes) {
  const auto& f = g.invariants();
  r.field(prefix + "base", g.base().name());
  r.field(prefix + "rank", std::to_string(f.rank));
  r.field(prefix + "torsion", join_integers(f.torsion), f.torsion.empty() ? "none" : join_integers(f.torsion, ", "));
  r.field(prefix + "group", to_string(f));
  for (const auto& c : classes) r.field(prefix + "coord." + c.name(), join_integers(g.class_coordinates(c)), format_coordinates(g.class_coordinates(c)));
}

}  // namespace k0
