#pragma once

// RFC-4180 style CSV output with LF line endings and a fixed float format
// (6 significant digits, '.' separator) so identical inputs give identical bytes.

#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace seesaw::csv {

using Cell = std::variant<std::string, double, long long>;

/// printf "%.6g" formatting, independent of the global locale.
std::string format_number(double v);

std::string quote(const std::string& field);

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& columns);
  void row(const std::vector<Cell>& cells);

 private:
  void write_line(const std::vector<std::string>& fields);

  std::ostream& out_;
  std::size_t columns_ = 0;
};

}  // namespace seesaw::csv
