#include "mbrd/io.hpp"

#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mbrd {

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

std::string join_csv(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    line += cells[i];
  }
  return line;
}

void ensure_dir(const std::string& path) {
  std::filesystem::create_directories(path);
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::trunc) {
  if (!out_) throw std::runtime_error("cannot open for writing: " + path);
  out_ << join_csv(header) << '\n';
  out_.flush();
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(fmt_double(v));
  out_ << join_csv(cells) << '\n';
  out_.flush();
}

void CsvWriter::raw_line(const std::string& line) {
  out_ << line << '\n';
  out_.flush();
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

std::vector<std::string> split_line(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  CsvTable table;
  std::string line;
  bool have_header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    if (!have_header) {
      table.header = split_line(s, ',');
      have_header = true;
      continue;
    }
    const std::vector<std::string> cells = split_line(s, ',');
    if (cells.size() != table.header.size())
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": ragged row");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string& c : cells) {
      const std::string t = strip(c);
      if (t == "nan" || t == "-nan") {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      try {
        std::size_t pos = 0;
        const double v = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument(t);
        row.push_back(v);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": unparsable cell '" + t + "'");
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw std::runtime_error(path + ": no header row");
  return table;
}

void write_kv(const std::string& path, const KvPairs& kv) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
}

KvPairs read_kv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  KvPairs kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    kv.emplace_back(strip(s.substr(0, eq)), strip(s.substr(eq + 1)));
  }
  return kv;
}

std::string kv_get(const KvPairs& kv, const std::string& key,
                   const std::string& fallback) {
  std::string out = fallback;
  for (const auto& [k, v] : kv)
    if (k == key) out = v;
  return out;
}

}  // namespace mbrd
