#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <tuple>
#include <string>
#include <vector>

#include "pic/dataset.hpp"
#include "pic/pipeline.hpp"
#include "pic/run_record.hpp"
#include "pic/synth.hpp"

namespace pic {

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

inline Index distinct_count(const std::vector<int>& labels) {
  std::vector<int> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  return Index(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

}  // namespace detail

// Seed for one sweep trial, derived from (base seed, per, trial).
inline std::uint64_t trial_seed(std::uint64_t base, double per, int trial) {
  return base ^ mix64(mix64(std::bit_cast<std::uint64_t>(per)) ^ std::uint64_t(trial));
}

// Writes a PER-masked copy of a complete dataset to out_dir; returns the new manifest.
inline std::filesystem::path cmd_mask(const std::filesystem::path& manifest, double per,
                                      std::uint64_t seed, const std::filesystem::path& out_dir) {
  if (!(per >= 0.0 && per <= 1.0)) throw UsageError("--per must lie in [0, 1]");
  const auto ds = load_dataset(manifest);
  return write_dataset(apply_per_mask(ds, {per, seed}), out_dir);
}

struct ClusterArgs {
  std::filesystem::path manifest;
  PipelineOptions options;
  std::filesystem::path out;
  bool record_timing = false;
};

// Runs the pipeline; writes labels.txt, record.jsonl and diagnostics.txt under out.
inline RunRecord cmd_cluster(const ClusterArgs& args) {
  if (args.options.clusters < 1) throw UsageError("--clusters must be at least 1");
  if (args.options.k_nn < 1) throw UsageError("--knn must be at least 1");
  if (!(args.options.beta_tilde >= 0.0)) throw UsageError("--beta-tilde must be nonnegative");
  const auto ds = load_dataset(args.manifest);
  const auto result = pic_pipeline(ds, args.options);

  RunRecord record;
  record.dataset = ds.name;
  record.per = 1.0 - double((ds.mask.rowwise().all()).count()) / double(ds.n());
  record.seed = args.options.seed;
  record.beta_tilde = args.options.beta_tilde;
  record.k_nn = args.options.k_nn;
  record.clusters = args.options.clusters;
  record.beta = result.beta;
  record.omega.assign(result.weights.omega.data(),
                      result.weights.omega.data() + result.weights.omega.size());
  if (result.score) {
    record.acc = result.score->acc;
    record.nmi = result.score->nmi;
  }
  if (args.record_timing) record.wall_time_ms = result.timings.total_ms();

  {
    auto out = detail::open_output(args.out / "labels.txt");
    for (int label : result.labels) out << label << '\n';
  }
  detail::open_output(args.out / "record.jsonl") << to_line(record) << '\n';
  {
    auto out = detail::open_output(args.out / "diagnostics.txt");
    out << consensus_diagnostics(result.angles, result.weights, result.beta,
                                 args.options.regularizer);
    out << "provenance\nview\tnative\taveraged\tzero_fallback\n";
    for (std::size_t v = 0; v < result.provenance.size(); ++v) {
      const auto& c = result.provenance[v];
      out << v << '\t' << c.native << '\t' << c.averaged << '\t' << c.zero_fallback << '\n';
    }
  }
  return record;
}

struct SweepRow {
  double value = 0.0;  // grid point (PER or beta_tilde)
  int trials = 0;
  double acc_mean = 0.0;
  double acc_std = 0.0;
  double nmi_mean = 0.0;
  double nmi_std = 0.0;
};

struct SweepArgs {
  std::filesystem::path manifest;
  std::vector<double> grid;   // PER values or beta_tilde values
  double fixed_per = 0.0;     // used by the beta sweep
  double fixed_beta_tilde = 0.1;  // used by the PER sweep
  int trials = 20;
  std::uint64_t seed = 0;
  Index clusters = 0;  // 0 = number of distinct ground-truth labels
  Index k_nn = 9;
  Regularizer regularizer = Regularizer::manifold;
  std::filesystem::path out;  // empty = do not write files
  bool record_timing = false;
};

enum class SweepAxis { per, beta_tilde };

inline std::vector<double> default_per_grid() { return {0.0, 0.1, 0.3, 0.5, 0.7, 0.9}; }

inline std::vector<double> default_beta_grid() {
  return {1e-4, 1e-3, 1e-2, 1e-1, 1e0, 1e1, 1e2, 1e3};
}

namespace detail {

// Mean and population standard deviation.
inline std::pair<double, double> mean_std(const std::vector<double>& xs) {
  // Offsets from the first value keep the mean exact when all values agree.
  double offset = 0.0;
  for (double x : xs) offset += x - xs.front();
  const double mean = xs.front() + offset / double(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / double(xs.size()))};
}

inline std::vector<SweepRow> run_sweep(const SweepArgs& args, SweepAxis axis,
                                       std::vector<RunRecord>* records_out = nullptr) {
  if (args.trials < 1) throw UsageError("--trials must be at least 1");
  if (args.grid.empty()) throw UsageError("sweep grid is empty");
  for (double g : args.grid) {
    if (axis == SweepAxis::per && !(g >= 0.0 && g <= 1.0)) throw UsageError("PER values must lie in [0, 1]");
    if (axis == SweepAxis::beta_tilde && !(g >= 0.0)) throw UsageError("beta_tilde values must be nonnegative");
  }
  if (!(args.fixed_per >= 0.0 && args.fixed_per <= 1.0)) throw UsageError("--per must lie in [0, 1]");
  if (!(args.fixed_beta_tilde >= 0.0)) throw UsageError("--beta-tilde must be nonnegative");

  const auto ds = load_dataset(args.manifest);
  if (!ds.labels) throw DataError("sweeps need a labeled dataset");
  if (!ds.is_complete()) throw DataError("sweeps need a complete dataset");
  const Index clusters = args.clusters > 0 ? args.clusters : distinct_count(*ds.labels);

  std::vector<SweepRow> rows;
  std::vector<RunRecord> records;
  for (double g : args.grid) {
    const double per = axis == SweepAxis::per ? g : args.fixed_per;
    const double beta_tilde = axis == SweepAxis::beta_tilde ? g : args.fixed_beta_tilde;
    std::vector<double> accs, nmis;
    for (int trial = 0; trial < args.trials; ++trial) {
      const std::uint64_t seed = trial_seed(args.seed, per, trial);
      const auto masked = apply_per_mask(ds, {per, seed});
      PipelineOptions opt;
      opt.clusters = clusters;
      opt.k_nn = args.k_nn;
      opt.beta_tilde = beta_tilde;
      opt.seed = mix64(seed);
      opt.regularizer = args.regularizer;
      const auto result = pic_pipeline(masked, opt);

      RunRecord r;
      r.dataset = ds.name;
      r.per = per;
      r.seed = seed;
      r.trial = trial;
      r.beta_tilde = beta_tilde;
      r.k_nn = args.k_nn;
      r.clusters = clusters;
      r.beta = result.beta;
      r.omega.assign(result.weights.omega.data(),
                     result.weights.omega.data() + result.weights.omega.size());
      r.acc = result.score->acc;
      r.nmi = result.score->nmi;
      if (args.record_timing) r.wall_time_ms = result.timings.total_ms();
      accs.push_back(*r.acc);
      nmis.push_back(*r.nmi);
      records.push_back(std::move(r));
    }
    SweepRow row;
    row.value = g;
    row.trials = args.trials;
    std::tie(row.acc_mean, row.acc_std) = mean_std(accs);
    std::tie(row.nmi_mean, row.nmi_std) = mean_std(nmis);
    rows.push_back(row);
  }

  if (!args.out.empty()) {
    {
      auto out = open_output(args.out / "records.jsonl");
      for (const auto& r : records) out << to_line(r) << '\n';
    }
    auto out = open_output(args.out / "summary.tsv");
    out << (axis == SweepAxis::per ? "per" : "beta_tilde")
        << "\ttrials\tacc_mean\tacc_std\tnmi_mean\tnmi_std\n";
    out << std::fixed << std::setprecision(6);
    for (const auto& row : rows) {
      out << format_double(row.value) << '\t' << row.trials << '\t' << row.acc_mean << '\t'
          << row.acc_std << '\t' << row.nmi_mean << '\t' << row.nmi_std << '\n';
    }
  }
  if (records_out) *records_out = std::move(records);
  return rows;
}

}  // namespace detail

// One row per PER value: mean and standard deviation of ACC/NMI over trials,
// each trial with a fresh mask and k-means seed.
inline std::vector<SweepRow> cmd_sweep_per(const SweepArgs& args,
                                           std::vector<RunRecord>* records = nullptr) {
  return detail::run_sweep(args, SweepAxis::per, records);
}

// One row per beta_tilde value at a fixed PER. Masks depend only on
// (seed, per, trial), so every grid point sees the same incomplete datasets.
inline std::vector<SweepRow> cmd_sweep_beta(const SweepArgs& args,
                                            std::vector<RunRecord>* records = nullptr) {
  return detail::run_sweep(args, SweepAxis::beta_tilde, records);
}

inline std::filesystem::path cmd_synth(const SynthSpec& spec, const std::filesystem::path& out_dir) {
  return write_dataset(synthesize(spec), out_dir);
}

}  // namespace pic
