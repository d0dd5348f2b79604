#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace esr {

/// Univariate data, optionally with per-point uncertainties on x and y.
struct Dataset {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> sigma_x;  // empty unless the file has uncertainty columns
  std::vector<double> sigma_y;

  std::size_t size() const { return x.size(); }
  bool has_sigma() const { return !sigma_x.empty(); }
};

/// CSV with a header naming columns x, y and optionally sigma_x, sigma_y (any
/// order, extra columns ignored). Lines starting with '#' and blank lines are
/// skipped. Throws DataError with a line number on malformed input.
Dataset parse_dataset(std::string_view text, std::string name = "data");
Dataset load_dataset(const std::filesystem::path& path);

void save_dataset(const Dataset& d, const std::filesystem::path& path);

}  // namespace esr
