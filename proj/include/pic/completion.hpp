#pragma once

#include <array>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "pic/common.hpp"
#include "pic/similarity.hpp"

namespace pic {

enum class Provenance : std::uint8_t { native, averaged, zero_fallback };

using ProvenanceMatrix = Eigen::Array<Provenance, Eigen::Dynamic, Eigen::Dynamic>;

struct CompleteSimilarity {
  Matrix values;  // symmetric, zero diagonal, entries in [0, 1]
  ProvenanceMatrix provenance;
};

// Filled but not yet symmetrized matrix for one view.
struct FilledSimilarity {
  Matrix values;
  ProvenanceMatrix provenance;
};

// Entry-wise cross-view completion. Undefined (i, j) in view v takes the mean
// of (i, j) over the views that define it, summed in view order; pairs that no
// view defines become 0.
inline std::vector<FilledSimilarity> fill_missing(const std::vector<MaskedSimilarity>& sims) {
  if (sims.empty()) return {};
  const Index n = sims.front().values.rows();
  for (const auto& s : sims) {
    if (s.values.rows() != n || s.values.cols() != n || s.defined.rows() != n ||
        s.defined.cols() != n) {
      throw DataError("similarity matrices differ in shape");
    }
  }

  Matrix sum = Matrix::Zero(n, n);
  Eigen::ArrayXXi count = Eigen::ArrayXXi::Zero(n, n);
  for (const auto& s : sims) {
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        if (s.defined(i, j)) {
          sum(i, j) += s.values(i, j);
          ++count(i, j);
        }
      }
    }
  }

  std::vector<FilledSimilarity> out;
  out.reserve(sims.size());
  for (const auto& s : sims) {
    FilledSimilarity f{s.values, ProvenanceMatrix::Constant(n, n, Provenance::native)};
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        if (s.defined(i, j)) continue;
        if (count(i, j) > 0) {
          f.values(i, j) = sum(i, j) / double(count(i, j));
          f.provenance(i, j) = Provenance::averaged;
        } else {
          f.values(i, j) = 0.0;
          f.provenance(i, j) = Provenance::zero_fallback;
        }
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

// Symmetrize as (A + A^T) / 2, zero the diagonal and clamp to [0, 1].
inline CompleteSimilarity postprocess(const Matrix& a, ProvenanceMatrix provenance = {}) {
  if (a.rows() != a.cols()) throw DataError("similarity matrix must be square");
  const Index n = a.rows();
  if (provenance.size() == 0) provenance = ProvenanceMatrix::Constant(n, n, Provenance::native);
  CompleteSimilarity out{0.5 * (a + a.transpose()), std::move(provenance)};
  out.values.diagonal().setZero();
  out.values = out.values.cwiseMax(0.0).cwiseMin(1.0);
  return out;
}

inline std::vector<CompleteSimilarity> complete_all(const std::vector<MaskedSimilarity>& sims) {
  std::vector<CompleteSimilarity> out;
  for (auto& filled : fill_missing(sims)) {
    out.push_back(postprocess(filled.values, std::move(filled.provenance)));
  }
  return out;
}

struct ProvenanceCounts {
  Index native = 0;
  Index averaged = 0;
  Index zero_fallback = 0;
};

inline ProvenanceCounts count_provenance(const CompleteSimilarity& s) {
  ProvenanceCounts c;
  c.native = (s.provenance == Provenance::native).count();
  c.averaged = (s.provenance == Provenance::averaged).count();
  c.zero_fallback = (s.provenance == Provenance::zero_fallback).count();
  return c;
}

// Text table of provenance counts, one line per view.
inline std::string provenance_table(const std::vector<CompleteSimilarity>& sims) {
  std::ostringstream os;
  os << "view\tnative\taveraged\tzero_fallback\n";
  for (std::size_t v = 0; v < sims.size(); ++v) {
    const auto c = count_provenance(sims[v]);
    os << v << '\t' << c.native << '\t' << c.averaged << '\t' << c.zero_fallback << '\n';
  }
  return os.str();
}

}  // namespace pic
