#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace k0 {

// Every engine-level failure that is not reported through a verdict.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Characters that carry meaning in the spec and word syntax.
inline constexpr std::string_view kReservedLabelChars = "[],#=*>";

inline bool is_valid_label(std::string_view text) {
  if (text.empty() || text == "+") return false;
  for (unsigned char ch : text) {
    if (ch <= 0x20 || ch == 0x7f) return false;
    if (kReservedLabelChars.find(static_cast<char>(ch)) != std::string_view::npos) return false;
  }
  return true;
}

// Name of a heap generator (an isomorphism class, a group element, a letter).
// Compares by exact bytes.
class GeneratorLabel {
 public:
  explicit GeneratorLabel(std::string name) : name_(std::move(name)) {
    if (!is_valid_label(name_)) throw Error("invalid generator label '" + name_ + "'");
  }

  const std::string& name() const noexcept { return name_; }

  friend auto operator<=>(const GeneratorLabel&, const GeneratorLabel&) = default;
  friend bool operator==(const GeneratorLabel&, const GeneratorLabel&) = default;

 private:
  std::string name_;
};

inline GeneratorLabel operator""_g(const char* text, std::size_t size) {
  return GeneratorLabel(std::string(text, size));
}

}  // namespace k0
