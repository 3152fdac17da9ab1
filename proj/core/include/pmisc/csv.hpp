#pragma once

#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace pmisc {

/// Round-trip formatting for reals (%.17g).
inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Minimal comma-separated writer; cells never contain commas.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(std::initializer_list<std::string_view> cols) { write_cells(cols); }
  void header(const std::vector<std::string>& cols) { write_cells(cols); }

  template <typename... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
    os_ << '\n';
  }

  void row_cells(const std::vector<std::string>& cells) { write_cells(cells); }

 private:
  template <typename C>
  void write_cells(const C& cols) {
    bool first = true;
    for (const auto& c : cols) {
      if (!first) os_ << ',';
      os_ << c;
      first = false;
    }
    os_ << '\n';
  }

  template <typename T>
  static std::string cell(const T& v) {
    if constexpr (std::is_floating_point_v<T>) {
      return format_real(static_cast<double>(v));
    } else if constexpr (std::is_same_v<T, bool>) {
      return v ? "1" : "0";
    } else if constexpr (std::is_arithmetic_v<T>) {
      return std::to_string(v);
    } else {
      return std::string(v);
    }
  }

  std::ostream& os_;
};

}  // namespace pmisc
