#include "seesaw/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "seesaw/error.hpp"

namespace seesaw::csv {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                       std::chars_format::general, 6);
  if (ec != std::errc{}) throw Error(ErrorCode::invalid_argument, "number formatting failed");
  return std::string(buf.data(), ptr);
}

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void Writer::header(const std::vector<std::string>& columns) {
  columns_ = columns.size();
  write_line(columns);
}

void Writer::row(const std::vector<Cell>& cells) {
  if (columns_ != 0 && cells.size() != columns_) {
    throw Error(ErrorCode::invalid_argument, "CSV row width does not match the header");
  }
  std::vector<std::string> fields;
  fields.reserve(cells.size());
  for (const Cell& c : cells) {
    if (const auto* s = std::get_if<std::string>(&c)) {
      fields.push_back(*s);
    } else if (const auto* d = std::get_if<double>(&c)) {
      fields.push_back(format_number(*d));
    } else {
      fields.push_back(std::to_string(std::get<long long>(c)));
    }
  }
  write_line(fields);
}

void Writer::write_line(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << quote(fields[i]);
  }
  out_ << '\n';
}

}  // namespace seesaw::csv
