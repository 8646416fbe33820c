#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "lpocv/estimator.hpp"

namespace lpocv {

/// Which field of a CSV line holds the observation. With neither set the input is one
/// value per line. A column name implies a header line.
struct ColumnSelector {
  std::optional<std::string> name;
  std::optional<std::size_t> index;  // 0-based
  bool header = false;               // skip the first line when selecting by index
};

/// Parses observations; blank lines are skipped, CRLF is accepted, and every error names
/// the 1-based line it comes from.
Sample parse_samples(std::string_view text, const ColumnSelector& column = {});

Sample ingest_samples(const std::string& path, const ColumnSelector& column = {});

/// Reads a whole file; throws Io on failure.
std::string read_file(const std::string& path);

}  // namespace lpocv
