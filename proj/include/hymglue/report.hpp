// report.hpp
//
// Tables written as CSV with RFC 4180 quoting, and SHA-256 content hashes for
// the manifest.

#pragma once

#include <string>
#include <vector>

namespace hymglue {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
};

// Shortest round-trip decimal form.
std::string cell(double x);
std::string cell(int x);
std::string cell(bool x);

std::string csv_field(const std::string& s);
std::string to_csv(const Table& t);

std::string sha256_hex(const std::string& bytes);

}  // namespace hymglue
