#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "trefftz/types.hpp"

namespace trefftz::cli
{

/// Shortest round-trip decimal form; "nan" / "inf" / "-inf" otherwise.
std::string format_number(double value);
std::string format_number(std::size_t value);
std::string format_number(int value);

class CsvError : public Error
{
public:
  using Error::Error;
};

class CsvTable
{
public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> row);
  const std::vector<std::string> &header() const { return header_; }
  const std::vector<std::vector<std::string>> &rows() const { return rows_; }

  /// Header, rows, then `# config-hash=<hex>, version=<v>`.
  std::string render(std::uint64_t config_hash) const;

  /// Writes render() to a temporary sibling and renames it into place.
  void write(const std::filesystem::path &path, std::uint64_t config_hash) const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Reads a table written by CsvTable; comment lines are skipped.
CsvTable read_csv(const std::filesystem::path &path);

/// Column index by name; throws CsvError naming the missing column.
std::size_t column(const CsvTable &table, const std::string &name);

std::string hex64(std::uint64_t value);

}  // namespace trefftz::cli
