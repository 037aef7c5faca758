#include "squeezelab/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace squeezelab {

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json-lines" || name == "jsonl") return OutputFormat::JsonLines;
  throw std::invalid_argument("unknown output format '" + name + "' (csv or json-lines)");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string csv_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  return csv_field(std::get<std::string>(cell));
}

std::string json_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return std::isfinite(*d) ? format_double(*d) : "null";
  return nlohmann::json(std::get<std::string>(cell)).dump();
}

}  // namespace

RowWriter::RowWriter(std::ostream& out, OutputFormat format, std::vector<std::string> columns,
                     std::string path)
    : out_(out), format_(format), columns_(std::move(columns)), path_(std::move(path)) {}

void RowWriter::check() {
  if (!out_) throw std::runtime_error("write failed: " + path_);
}

void RowWriter::begin() {
  if (format_ != OutputFormat::Csv) return;
  for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << csv_field(columns_[i]);
  out_ << '\n';
  check();
}

void RowWriter::write(const ResultRow& row) {
  if (row.cells.size() != columns_.size())
    throw std::logic_error("row has " + std::to_string(row.cells.size()) + " cells, expected " +
                           std::to_string(columns_.size()));
  if (format_ == OutputFormat::Csv) {
    for (std::size_t i = 0; i < row.cells.size(); ++i) out_ << (i ? "," : "") << csv_cell(row.cells[i]);
  } else {
    out_ << '{';
    for (std::size_t i = 0; i < row.cells.size(); ++i)
      out_ << (i ? "," : "") << nlohmann::json(columns_[i]).dump() << ':' << json_cell(row.cells[i]);
    out_ << '}';
  }
  out_ << '\n';
  out_.flush();
  check();
}

void emit(const std::vector<ResultRow>& rows, const std::vector<std::string>& columns,
          OutputFormat format, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  RowWriter writer(f, format, columns, path);
  writer.begin();
  for (const auto& row : rows) writer.write(row);
  f.close();
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace squeezelab
