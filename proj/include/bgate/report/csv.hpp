// CSV tables with a leading '#' provenance block.  RFC-4180 quoting, LF
// line endings, doubles written with 17 significant digits.
#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

namespace bgate::report {

inline constexpr std::string_view kToolVersion = "bgate 1.0.0";

using Provenance = std::vector<std::pair<std::string, std::string>>;

/// Shortest-safe lossless text for a double: 17 significant digits.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_number(std::string_view s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::string quote_field(std::string_view f) {
  if (f.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(f);
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

struct CsvTable {
  Provenance provenance;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw std::out_of_range("CsvTable: no column " + std::string(name));
  }
};

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const Provenance& provenance, const std::vector<std::string>& header) : out_(out) {
    for (const auto& [k, v] : provenance) out_ << "# " << k << " = " << v << '\n';
    write_row(header);
  }

  void write_row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << quote_field(fields[i]);
    }
    out_ << '\n';
  }

 private:
  std::ostream& out_;
};

namespace detail {

// Splits one record; returns false at end of input.  Quoted fields may span
// lines.
inline bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      fields.push_back(std::move(field));
      return true;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (any) fields.push_back(std::move(field));
  return any;
}

}  // namespace detail

inline CsvTable read_csv(std::istream& in) {
  CsvTable table;
  // provenance lines
  while (in.peek() == '#') {
    std::string line;
    std::getline(in, line);
    std::string_view body(line);
    body.remove_prefix(1);
    while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
    const auto eq = body.find(" = ");
    if (eq == std::string_view::npos) {
      table.provenance.emplace_back(std::string(body), "");
    } else {
      table.provenance.emplace_back(std::string(body.substr(0, eq)), std::string(body.substr(eq + 3)));
    }
  }
  std::vector<std::string> fields;
  if (!detail::read_record(in, table.header)) throw std::runtime_error("read_csv: missing header row");
  while (detail::read_record(in, fields)) {
    if (fields.size() != table.header.size()) {
      throw std::runtime_error("read_csv: row " + std::to_string(table.rows.size() + 1) + " has " +
                               std::to_string(fields.size()) + " fields, header has " +
                               std::to_string(table.header.size()));
    }
    table.rows.push_back(fields);
  }
  return table;
}

inline CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_csv(in);
}

}  // namespace bgate::report
