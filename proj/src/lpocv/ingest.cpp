#include "lpocv/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "lpocv/errors.hpp"

namespace lpocv {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

double parse_value(std::string_view field, std::size_t line) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    fail(ErrorCode::Parse, where(line) + "cannot parse '" + std::string(field) + "' as a real number");
  }
  if (v < 0.0 || v > 1.0) fail(ErrorCode::OutOfRange, where(line) + "value " + std::string(field) + " lies outside [0,1]");
  return v;
}

}  // namespace

Sample parse_samples(std::string_view text, const ColumnSelector& column) {
  std::vector<double> values;
  std::optional<std::size_t> index = column.index;
  bool skip_header = column.name.has_value() || column.header;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (skip_header) {
      skip_header = false;
      if (column.name) {
        const auto fields = split_fields(line);
        for (std::size_t i = 0; i < fields.size(); ++i) {
          if (fields[i] == *column.name) index = i;
        }
        if (!index) fail(ErrorCode::Parse, where(line_no) + "header has no column '" + *column.name + "'");
      }
      continue;
    }
    if (index) {
      const auto fields = split_fields(line);
      if (*index >= fields.size()) {
        fail(ErrorCode::Parse, where(line_no) + "expected at least " + std::to_string(*index + 1) + " fields");
      }
      values.push_back(parse_value(fields[*index], line_no));
    } else {
      values.push_back(parse_value(line, line_no));
    }
  }
  if (values.empty()) fail(ErrorCode::EmptySample, "input contains no observations");
  return Sample(std::move(values));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(ErrorCode::Io, "error reading '" + path + "'");
  return buf.str();
}

Sample ingest_samples(const std::string& path, const ColumnSelector& column) {
  return parse_samples(read_file(path), column);
}

}  // namespace lpocv
