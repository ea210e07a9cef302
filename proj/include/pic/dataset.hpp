#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pic/common.hpp"

namespace pic {

// Multi-view data: per-view feature matrices (features x instances) and an
// instance-by-view observation mask. Feature values of unobserved
// (instance, view) pairs are carried along but never read.
struct MultiViewDataset {
  std::string name;
  std::vector<Matrix> views;
  BoolMatrix mask;  // n x m, true = observed
  std::optional<std::vector<int>> labels;

  Index n() const { return mask.rows(); }
  Index m() const { return mask.cols(); }
  Index observed_count(Index view) const { return mask.col(view).count(); }
  bool is_complete() const { return mask.all(); }
};

struct MaskingSpec {
  double per = 0.0;  // partial example ratio in [0, 1]
  std::uint64_t seed = 0;
};

// Maps arbitrary ids to 0..c-1 in increasing id order.
inline std::vector<int> relabel_contiguous(const std::vector<long long>& ids) {
  std::vector<long long> sorted = ids;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out[i] = int(std::lower_bound(sorted.begin(), sorted.end(), ids[i]) - sorted.begin());
  }
  return out;
}

inline std::vector<int> relabel_contiguous(const std::vector<int>& ids) {
  return relabel_contiguous(std::vector<long long>(ids.begin(), ids.end()));
}

// Checks the dataset invariants and normalizes labels. Throws DataError.
inline void validate(MultiViewDataset& ds) {
  if (ds.views.empty()) throw DataError("dataset has no views");
  const Index n = ds.views.front().cols();
  for (const auto& x : ds.views) {
    if (x.cols() != n) throw DataError("instance count mismatch across views");
  }
  if (ds.mask.size() == 0) ds.mask = BoolMatrix::Constant(n, Index(ds.views.size()), true);
  if (ds.mask.rows() != n || ds.mask.cols() != Index(ds.views.size())) {
    throw DataError("mask shape does not match n x m");
  }
  for (Index i = 0; i < n; ++i) {
    if (!ds.mask.row(i).any()) {
      throw DataError("instance has no observed view (instance " + std::to_string(i) + ")");
    }
  }
  for (Index v = 0; v < ds.m(); ++v) {
    for (Index i = 0; i < n; ++i) {
      if (ds.mask(i, v) && !ds.views[v].col(i).allFinite()) {
        throw DataError("non-finite feature for observed instance " + std::to_string(i) +
                        " in view " + std::to_string(v));
      }
    }
  }
  if (ds.labels) {
    if (Index(ds.labels->size()) != n) throw DataError("label count does not match instance count");
    *ds.labels = relabel_contiguous(*ds.labels);
  }
}

inline MultiViewDataset make_dataset(std::vector<Matrix> views, BoolMatrix mask = {},
                                     std::optional<std::vector<int>> labels = std::nullopt,
                                     std::string name = "dataset") {
  MultiViewDataset ds{std::move(name), std::move(views), std::move(mask), std::move(labels)};
  validate(ds);
  return ds;
}

namespace detail {

inline std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  auto is_sep = [](char ch) { return ch == ',' || ch == ' ' || ch == '\t' || ch == '\r'; };
  while (pos < line.size()) {
    while (pos < line.size() && is_sep(line[pos])) ++pos;
    std::size_t end = pos;
    while (end < line.size() && !is_sep(line[end])) ++end;
    if (end > pos) cells.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return cells;
}

inline bool skip_line(std::string_view line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string_view::npos || line[first] == '#';
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

template <class T>
T parse_cell(std::string_view cell, const std::filesystem::path& path, std::size_t line_no) {
  T value{};
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw DataError("non-numeric cell '" + std::string(cell) + "' in " + path.string() + ":" +
                    std::to_string(line_no));
  }
  return value;
}

template <class T>
std::vector<std::vector<T>> read_table(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<std::vector<T>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    std::vector<T> row;
    for (auto cell : split_cells(line)) row.push_back(parse_cell<T>(cell, path, line_no));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError("ragged row in " + path.string() + ":" + std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

// Shortest round-trip decimal form; "nan" for NaN.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

// Delimited text, one row per feature, one column per instance.
inline Matrix read_matrix(const std::filesystem::path& path) {
  const auto rows = detail::read_table<double>(path);
  if (rows.empty()) throw DataError("empty matrix file " + path.string());
  Matrix x(Index(rows.size()), Index(rows.front().size()));
  for (Index r = 0; r < x.rows(); ++r) {
    for (Index c = 0; c < x.cols(); ++c) x(r, c) = rows[r][c];
  }
  return x;
}

inline BoolMatrix read_mask(const std::filesystem::path& path) {
  const auto rows = detail::read_table<int>(path);
  if (rows.empty()) throw DataError("empty mask file " + path.string());
  BoolMatrix mask(Index(rows.size()), Index(rows.front().size()));
  for (Index r = 0; r < mask.rows(); ++r) {
    for (Index c = 0; c < mask.cols(); ++c) {
      const int cell = rows[r][c];
      if (cell != 0 && cell != 1) throw DataError("mask entries must be 0 or 1 in " + path.string());
      mask(r, c) = cell == 1;
    }
  }
  return mask;
}

// Integer ids separated by whitespace, commas or newlines.
inline std::vector<long long> read_labels(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  std::vector<long long> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::skip_line(line)) continue;
    for (auto cell : detail::split_cells(line)) {
      ids.push_back(detail::parse_cell<long long>(cell, path, line_no));
    }
  }
  return ids;
}

// Manifest: "key = value" lines, '#' comments. Keys: name, view (repeated, in
// view order), mask, labels. Relative paths resolve against the manifest's directory.
struct Manifest {
  std::string name;
  std::vector<std::filesystem::path> views;
  std::optional<std::filesystem::path> mask;
  std::optional<std::filesystem::path> labels;
};

inline Manifest read_manifest(const std::filesystem::path& manifest_path) {
  auto in = detail::open_input(manifest_path);
  const auto base = manifest_path.parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
  };
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };

  Manifest manifest;
  manifest.name = manifest_path.stem().string();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::skip_line(line)) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError("manifest line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "name") {
      manifest.name = value;
    } else if (key == "view") {
      manifest.views.push_back(resolve(value));
    } else if (key == "mask") {
      manifest.mask = resolve(value);
    } else if (key == "labels") {
      manifest.labels = resolve(value);
    } else {
      throw DataError("manifest line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return manifest;
}

inline MultiViewDataset load_dataset(const std::filesystem::path& manifest_path) {
  const Manifest manifest = read_manifest(manifest_path);
  if (manifest.views.size() < 2) throw DataError("manifest must list at least 2 views");

  MultiViewDataset ds;
  ds.name = manifest.name;
  for (const auto& path : manifest.views) ds.views.push_back(read_matrix(path));
  const Index n = ds.views.front().cols();
  for (const auto& x : ds.views) {
    if (x.cols() != n) throw DataError("instance count mismatch across views");
  }
  if (manifest.mask) {
    ds.mask = read_mask(*manifest.mask);
  } else {
    ds.mask = BoolMatrix::Constant(n, Index(ds.views.size()), true);
  }
  if (manifest.labels) {
    const auto ids = read_labels(*manifest.labels);
    ds.labels = relabel_contiguous(ids);
  }
  validate(ds);
  return ds;
}

// Writes view_<v>.txt (unobserved columns as nan), mask.txt, labels.txt when
// present, and manifest.txt into dir. Returns the manifest path.
inline std::filesystem::path write_dataset(const MultiViewDataset& ds,
                                           const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [](const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
  };

  std::ostringstream manifest;
  manifest << "name = " << ds.name << "\n";
  for (Index v = 0; v < ds.m(); ++v) {
    const std::string file = "view_" + std::to_string(v) + ".txt";
    auto out = open(dir / file);
    const Matrix& x = ds.views[v];
    for (Index r = 0; r < x.rows(); ++r) {
      for (Index c = 0; c < x.cols(); ++c) {
        if (c) out << ' ';
        out << (ds.mask(c, v) ? format_double(x(r, c)) : std::string("nan"));
      }
      out << '\n';
    }
    manifest << "view = " << file << "\n";
  }
  {
    auto out = open(dir / "mask.txt");
    for (Index i = 0; i < ds.n(); ++i) {
      for (Index v = 0; v < ds.m(); ++v) out << (v ? " " : "") << (ds.mask(i, v) ? 1 : 0);
      out << '\n';
    }
    manifest << "mask = mask.txt\n";
  }
  if (ds.labels) {
    auto out = open(dir / "labels.txt");
    for (int label : *ds.labels) out << label << '\n';
    manifest << "labels = labels.txt\n";
  }
  const auto manifest_path = dir / "manifest.txt";
  open(manifest_path) << manifest.str();
  return manifest_path;
}

// Number of partial examples for a given ratio: round-half-to-even of per * n.
inline Index partial_example_count(double per, Index n) {
  return Index(std::nearbyint(per * double(n)));
}

// Incomplete-data protocol: round(per * n) instances, chosen uniformly without
// replacement, each keep a uniformly drawn nonempty proper subset of views.
inline MultiViewDataset apply_per_mask(const MultiViewDataset& ds, const MaskingSpec& spec) {
  if (!(spec.per >= 0.0 && spec.per <= 1.0)) throw UsageError("per must lie in [0, 1]");
  if (!ds.is_complete()) throw DataError("PER masking requires a complete dataset");
  const Index n = ds.n();
  const Index m = ds.m();
  const Index partial = partial_example_count(spec.per, n);
  MultiViewDataset out = ds;
  if (partial == 0) return out;
  if (m < 2) throw DataError("PER masking needs at least 2 views");
  if (m > 62) throw DataError("PER masking supports at most 62 views");

  std::mt19937_64 rng(spec.seed);
  // Partial Fisher-Yates: the first `partial` slots are a uniform sample.
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[i] = i;
  for (Index i = 0; i < partial; ++i) {
    const Index j = i + Index(uniform_below(rng, std::uint64_t(n - i)));
    std::swap(order[i], order[j]);
  }
  std::vector<Index> chosen(order.begin(), order.begin() + partial);
  std::sort(chosen.begin(), chosen.end());

  // b ranges over {0,1}^m without the all-zeros and all-ones patterns.
  const std::uint64_t patterns = (std::uint64_t(1) << m) - 2;
  for (Index i : chosen) {
    const std::uint64_t b = 1 + uniform_below(rng, patterns);
    for (Index v = 0; v < m; ++v) out.mask(i, v) = ((b >> v) & 1U) != 0;
  }
  return out;
}

}  // namespace pic
