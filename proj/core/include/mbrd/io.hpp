#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace mbrd {

// Shortest round-trippable-enough decimal form ("%.10g"); used everywhere a
// number reaches a file so identical runs produce identical bytes.
std::string fmt_double(double x);

std::string join_csv(const std::vector<std::string>& cells);

void ensure_dir(const std::string& path);

// Incremental CSV writer: header on open, one flushed line per row so a
// truncated run still leaves a readable prefix.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(const std::vector<double>& values);
  void raw_line(const std::string& line);  // e.g. trailing "# aborted" marker
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

// Reads a numeric CSV; '#' lines are skipped, "nan" parses to quiet NaN.
// Throws std::runtime_error on missing file or a ragged/unparsable row.
CsvTable read_csv(const std::string& path);

// Flat key=value config text. Order preserved so writes are deterministic.
using KvPairs = std::vector<std::pair<std::string, std::string>>;

void write_kv(const std::string& path, const KvPairs& kv);

// Parses key=value lines; '#' comments and blank lines ignored. Throws
// std::runtime_error naming the offending line on malformed input.
KvPairs read_kv(const std::string& path);

// Last value for `key`, or `fallback` when the key is absent.
std::string kv_get(const KvPairs& kv, const std::string& key,
                   const std::string& fallback);

}  // namespace mbrd
