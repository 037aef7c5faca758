#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "squeezelab/scenario.hpp"

namespace squeezelab {

enum class OutputFormat { Csv, JsonLines };

/// "csv" or "json-lines"; throws std::invalid_argument otherwise.
OutputFormat parse_format(const std::string& name);

/// %.12g, with "nan" / "inf" / "-inf" for non-finite values.
std::string format_double(double v);

/// Streams rows in one format. CSV starts with a header line; JSON-lines
/// writes one object per row with keys in column order and null for NaN.
class RowWriter {
 public:
  RowWriter(std::ostream& out, OutputFormat format, std::vector<std::string> columns,
            std::string path = "<stream>");

  void begin();
  void write(const ResultRow& row);

 private:
  void check();

  std::ostream& out_;
  OutputFormat format_;
  std::vector<std::string> columns_;
  std::string path_;
};

/// Writes a complete table to `path`. Throws std::runtime_error naming the
/// path on I/O failure.
void emit(const std::vector<ResultRow>& rows, const std::vector<std::string>& columns,
          OutputFormat format, const std::string& path);

}  // namespace squeezelab
