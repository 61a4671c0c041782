#include "trefftz/cli/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "trefftz/version.hpp"

namespace trefftz::cli
{

std::string format_number(double value)
{
  if (std::isnan(value))
  {
    return "nan";
  }
  if (std::isinf(value))
  {
    return value > 0 ? "inf" : "-inf";
  }
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string format_number(std::size_t value) { return std::to_string(value); }
std::string format_number(int value) { return std::to_string(value); }

std::string hex64(std::uint64_t value)
{
  std::array<char, 17> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + 16, value, 16);
  std::string digits(buf.data(), ptr);
  return std::string(16 - digits.size(), '0') + digits;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> row)
{
  if (row.size() != header_.size())
  {
    throw CsvError("row has " + std::to_string(row.size()) + " fields, header has " +
                   std::to_string(header_.size()));
  }
  rows_.push_back(std::move(row));
}

std::string CsvTable::render(std::uint64_t config_hash) const
{
  std::string out;
  const auto line = [&out](const std::vector<std::string> &fields) {
    for (std::size_t i = 0; i < fields.size(); ++i)
    {
      if (i)
      {
        out += ',';
      }
      out += fields[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto &row : rows_)
  {
    line(row);
  }
  out += "# config-hash=" + hex64(config_hash) + ", version=" + std::string(kVersion) + "\n";
  return out;
}

void CsvTable::write(const std::filesystem::path &path, std::uint64_t config_hash) const
{
  const std::string text = render(config_hash);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
    {
      throw CsvError("cannot write " + tmp.string());
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
    {
      throw CsvError("write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

CsvTable read_csv(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw CsvError("cannot open " + path.string());
  }
  const auto split = [](const std::string &line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
    {
      fields.push_back(field);
    }
    return fields;
  };
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line))
  {
    if (!line.empty() && line.front() != '#')
    {
      header = split(line);
      break;
    }
  }
  if (header.empty())
  {
    throw CsvError(path.string() + ": no header row");
  }
  CsvTable table(header);
  while (std::getline(in, line))
  {
    if (line.empty() || line.front() == '#')
    {
      continue;
    }
    table.add_row(split(line));
  }
  return table;
}

std::size_t column(const CsvTable &table, const std::string &name)
{
  const auto &h = table.header();
  for (std::size_t i = 0; i < h.size(); ++i)
  {
    if (h[i] == name)
    {
      return i;
    }
  }
  throw CsvError("missing column '" + name + "'");
}

}  // namespace trefftz::cli
