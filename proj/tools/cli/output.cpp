#include "output.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace dghcli {

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : out_(path), columns_(header.size()), path_(path) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  for (const auto& h : header) cell(std::string_view(h));
  end_row();
}

void CsvWriter::separator() {
  if (in_row_++ > 0) out_ << ',';
}

CsvWriter& CsvWriter::cell(double v) {
  separator();
  out_ << format_double(v);
  return *this;
}

CsvWriter& CsvWriter::cell(std::optional<double> v) {
  if (v) return cell(*v);
  separator();
  return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
  separator();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  separator();
  if (text.find_first_of(",\"\n") == std::string_view::npos) {
    out_ << text;
    return *this;
  }
  out_ << '"';
  for (char c : text) {
    if (c == '"') out_ << '"';
    out_ << c;
  }
  out_ << '"';
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) {
    throw std::logic_error(
        fmt::format("{}: row has {} cells, header has {}", path_.string(), in_row_, columns_));
  }
  out_ << '\n';
  in_row_ = 0;
}

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json optional_number(std::optional<double> v) { return v ? number(*v) : Json(nullptr); }

void write_json(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace dghcli
