#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace dghcli {

using Json = nlohmann::ordered_json;

/// Round-trip formatting: 17 significant digits.
std::string format_double(double v);

/// Comma-separated writer with a fixed header. Absent optionals become
/// empty cells.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

  CsvWriter& cell(double v);
  CsvWriter& cell(std::optional<double> v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(std::size_t v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(bool v) { return cell(static_cast<long long>(v ? 1 : 0)); }
  CsvWriter& cell(std::string_view text);
  CsvWriter& cell(const char* text) { return cell(std::string_view(text)); }
  void end_row();

 private:
  void separator();

  std::ofstream out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
  std::filesystem::path path_;
};

Json optional_number(std::optional<double> v);
Json number(double v);

void write_json(const std::filesystem::path& path, const Json& doc);

}  // namespace dghcli
