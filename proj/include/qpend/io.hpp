#pragma once

// CSV (RFC 4180) and JSON serialization.  All floating-point values are
// printed with 17 significant digits so that outputs are reproducible
// bit-for-bit and round-trip through the JSON reader.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpend/errors.hpp"
#include "qpend/util.hpp"

namespace qpend::io {

using json = nlohmann::json;

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += "\"";
  return out;
}

inline std::string cell(double v) { return fmt_g17(v); }
inline std::string cell(int v) { return std::to_string(v); }
inline std::string cell(std::size_t v) { return std::to_string(v); }
inline std::string cell(bool v) { return v ? "1" : "0"; }
inline std::string cell(const std::string& s) { return s; }
inline std::string cell(const char* s) { return s; }

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const {
    std::ostringstream os;
    for (std::size_t c = 0; c < header.size(); ++c)
      os << (c ? "," : "") << csv_quote(header[c]);
    os << "\n";
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c)
        os << (c ? "," : "") << csv_quote(row[c]);
      os << "\n";
    }
    return os.str();
  }

  void write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw computational_error("cannot open for writing: " + path);
    f << to_string();
    if (!f) throw computational_error("write failed: " + path);
  }
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw computational_error("cannot open for writing: " + path);
  f << text;
  if (!f) throw computational_error("write failed: " + path);
}

inline std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw computational_error("cannot open for reading: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// JSON records keep full precision by storing numbers as %.17g strings
// converted back by the reader; nlohmann's own double serialization is
// shortest-round-trip already, so plain numbers are used instead.
inline void write_json(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

inline json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw computational_error("cannot open for reading: " + path);
  json j;
  f >> j;
  return j;
}

inline json parse_json(const std::string& text) { return json::parse(text); }

}  // namespace qpend::io
