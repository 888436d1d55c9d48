#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace skewtv::io {

/// CSV ingestion failure; line is 1-based, 0 when the whole file is at fault.
class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t line, const std::string& message)
      : std::runtime_error(line == 0 ? message
                                     : "line " + std::to_string(line) + ": " +
                                           message),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Dataset {
  std::vector<double> values;
  bool had_header = false;
  std::string header;
};

/// Read a one-column numeric CSV. A non-numeric first cell is treated as a
/// header row; every other cell must parse as a finite number.
Dataset read_numeric_csv(const std::string& path);

/// FNV-1a 64-bit digest of a byte string, rendered as "fnv1a64:<hex>".
std::string fnv1a_digest(const std::string& bytes);
std::string fnv1a_digest_file(const std::string& path);

/// Write `content` to `path`, throwing on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace skewtv::io
