#include "esrlab/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "esrlab/error.hpp"

namespace esr {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

Dataset parse_dataset(std::string_view text, std::string name) {
  Dataset d;
  d.name = std::move(name);
  int cx = -1, cy = -1, csx = -1, csy = -1;
  bool header = false;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line);
    const std::string where = d.name + ":" + std::to_string(lineno) + ": ";
    if (!header) {
      for (int i = 0; i < static_cast<int>(fields.size()); ++i) {
        if (fields[i] == "x") cx = i;
        else if (fields[i] == "y") cy = i;
        else if (fields[i] == "sigma_x") csx = i;
        else if (fields[i] == "sigma_y") csy = i;
      }
      if (cx < 0 || cy < 0) throw DataError(where + "header must name columns x and y");
      if ((csx < 0) != (csy < 0)) throw DataError(where + "sigma_x and sigma_y must appear together");
      header = true;
      continue;
    }
    auto number = [&](int col, const char* what) {
      if (col >= static_cast<int>(fields.size())) throw DataError(where + "missing column " + what);
      const std::string_view f = fields[col];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        throw DataError(where + "bad number '" + std::string(f) + "' in column " + what);
      }
      if (!std::isfinite(v)) throw DataError(where + "non-finite value in column " + what);
      return v;
    };
    d.x.push_back(number(cx, "x"));
    d.y.push_back(number(cy, "y"));
    if (csx >= 0) {
      const double sx = number(csx, "sigma_x"), sy = number(csy, "sigma_y");
      if (sx < 0.0 || sy < 0.0) throw DataError(where + "negative uncertainty");
      d.sigma_x.push_back(sx);
      d.sigma_y.push_back(sy);
    }
  }
  if (!header) throw DataError(d.name + ": missing header line");
  if (d.x.empty()) throw DataError(d.name + ": no data rows");
  return d;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str(), path.string());
}

void save_dataset(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  out << (d.has_sigma() ? "x,y,sigma_x,sigma_y\n" : "x,y\n");
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << d.x[i] << ',' << d.y[i];
    if (d.has_sigma()) out << ',' << d.sigma_x[i] << ',' << d.sigma_y[i];
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace esr
