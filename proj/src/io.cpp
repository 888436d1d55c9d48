#include "skewtv/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace skewtv::io {

namespace {

std::string trim(std::string s) {
  const char* ws = " \t\r\n";
  const auto begin = s.find_first_not_of(ws);
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

bool parse_number(const std::string& cell, double* out) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, *out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

Dataset read_numeric_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError(0, "cannot open '" + path + "'");

  Dataset ds;
  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string cell = trim(line);
    if (cell.empty()) continue;
    if (cell.find(',') != std::string::npos)
      throw CsvError(line_no, "expected a single column, found a comma");
    double value;
    const bool numeric = parse_number(cell, &value);
    if (!numeric) {
      if (first_content_line) {
        first_content_line = false;
        ds.had_header = true;
        ds.header = cell;
        continue;
      }
      throw CsvError(line_no, "cell '" + cell + "' is not a number");
    }
    first_content_line = false;
    if (!std::isfinite(value)) throw CsvError(line_no, "value must be finite");
    ds.values.push_back(value);
  }
  if (ds.values.empty()) throw CsvError(0, "no numeric values in '" + path + "'");
  return ds;
}

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string fnv1a_digest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for digest");
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a_digest(ss.str());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace skewtv::io
