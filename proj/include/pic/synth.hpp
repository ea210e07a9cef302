#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "pic/common.hpp"
#include "pic/dataset.hpp"

namespace pic {

enum class SynthKind { gaussian_blobs, two_moons_views, ideal_blocks };

inline SynthKind parse_synth_kind(const std::string& s) {
  if (s == "gaussian_blobs") return SynthKind::gaussian_blobs;
  if (s == "two_moons_views") return SynthKind::two_moons_views;
  if (s == "ideal_blocks") return SynthKind::ideal_blocks;
  throw UsageError("unknown synthetic kind '" + s +
                   "' (expected gaussian_blobs, two_moons_views or ideal_blocks)");
}

inline const char* to_string(SynthKind k) {
  switch (k) {
    case SynthKind::gaussian_blobs: return "gaussian_blobs";
    case SynthKind::two_moons_views: return "two_moons_views";
    case SynthKind::ideal_blocks: return "ideal_blocks";
  }
  return "unknown";
}

struct SynthSpec {
  SynthKind kind = SynthKind::gaussian_blobs;
  Index n = 150;
  Index clusters = 3;
  Index views = 2;
  double noise = 1.0;
  std::uint64_t seed = 0;
};

namespace detail {

// Balanced contiguous blocks: instance i belongs to cluster floor(i c / n).
inline std::vector<int> block_labels(Index n, Index c) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) labels[std::size_t(i)] = int((i * c) / n);
  return labels;
}

inline constexpr Index kBlobDims = 4;

// Every view draws its own cluster centers (scale 3) in kBlobDims dimensions;
// points scatter around their center with standard deviation `noise`.
template <class Engine>
Matrix blob_view(const std::vector<int>& labels, Index c, double noise, Engine& rng) {
  Matrix centers(kBlobDims, c);
  for (Index j = 0; j < c; ++j) {
    for (Index r = 0; r < kBlobDims; ++r) centers(r, j) = 3.0 * standard_normal(rng);
  }
  Matrix x(kBlobDims, Index(labels.size()));
  for (Index i = 0; i < x.cols(); ++i) {
    for (Index r = 0; r < kBlobDims; ++r) {
      x(r, i) = centers(r, labels[std::size_t(i)]) + noise * standard_normal(rng);
    }
  }
  return x;
}

// Chain of interleaved half circles in the plane, rotated per view and lifted
// to 3-D with a noise-only third coordinate.
template <class Engine>
Matrix moons_view(const std::vector<int>& labels, double noise, Engine& rng) {
  const double angle = 2.0 * std::numbers::pi * uniform_unit(rng);
  const double cs = std::cos(angle), sn = std::sin(angle);
  Matrix x(3, Index(labels.size()));
  for (Index i = 0; i < x.cols(); ++i) {
    const int j = labels[std::size_t(i)];
    const double t = std::numbers::pi * uniform_unit(rng);
    double px, py;
    if (j % 2 == 0) {
      px = std::cos(t) + double(j);
      py = std::sin(t);
    } else {
      px = 1.0 - std::cos(t) + double(j - 1);
      py = 0.5 - std::sin(t);
    }
    px += 0.1 * noise * standard_normal(rng);
    py += 0.1 * noise * standard_normal(rng);
    x(0, i) = cs * px - sn * py;
    x(1, i) = sn * px + cs * py;
    x(2, i) = 0.1 * noise * standard_normal(rng);
  }
  return x;
}

// Clusters sit 1000 units apart along coordinate axes, so within-cluster
// distances are always smaller than between-cluster ones.
template <class Engine>
Matrix blocks_view(const std::vector<int>& labels, Index c, double noise, Engine& rng) {
  Matrix x = Matrix::Zero(c, Index(labels.size()));
  for (Index i = 0; i < x.cols(); ++i) {
    x(labels[std::size_t(i)], i) = 1000.0;
    for (Index r = 0; r < c; ++r) x(r, i) += noise * standard_normal(rng);
  }
  return x;
}

}  // namespace detail

inline MultiViewDataset synthesize(const SynthSpec& spec) {
  if (spec.n < 1) throw UsageError("n must be positive");
  if (spec.clusters < 1 || spec.clusters > spec.n) throw UsageError("clusters must satisfy 1 <= c <= n");
  if (spec.views < 1) throw UsageError("views must be positive");
  if (!(spec.noise >= 0.0)) throw UsageError("noise must be nonnegative");

  std::mt19937_64 rng(spec.seed);
  auto labels = detail::block_labels(spec.n, spec.clusters);
  std::vector<Matrix> views;
  for (Index v = 0; v < spec.views; ++v) {
    switch (spec.kind) {
      case SynthKind::gaussian_blobs:
        views.push_back(detail::blob_view(labels, spec.clusters, spec.noise, rng));
        break;
      case SynthKind::two_moons_views:
        views.push_back(detail::moons_view(labels, spec.noise, rng));
        break;
      case SynthKind::ideal_blocks:
        views.push_back(detail::blocks_view(labels, spec.clusters, spec.noise, rng));
        break;
    }
  }
  return make_dataset(std::move(views), {}, std::move(labels), to_string(spec.kind));
}

}  // namespace pic
