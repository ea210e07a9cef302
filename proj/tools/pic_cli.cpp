// Command-line harness: synthetic data, PER masking, single runs and sweeps.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pic/pic.hpp"

namespace {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

// PIC_LOG_LEVEL: error | warn | info | debug (default warn).
LogLevel log_level() {
  const char* env = std::getenv("PIC_LOG_LEVEL");
  if (!env) return LogLevel::warn;
  const std::string s(env);
  if (s == "error") return LogLevel::error;
  if (s == "info") return LogLevel::info;
  if (s == "debug") return LogLevel::debug;
  return LogLevel::warn;
}

void log(LogLevel level, const std::string& msg) {
  if (level <= log_level()) std::cerr << msg << '\n';
}

pic::Regularizer parse_regularizer(const std::string& s) {
  if (s == "manifold") return pic::Regularizer::manifold;
  if (s == "identity") return pic::Regularizer::identity;
  throw pic::UsageError("unknown regularizer '" + s + "'");
}

void print_sweep(const std::string& axis, const std::vector<pic::SweepRow>& rows) {
  std::cout << axis << "\ttrials\tacc\tnmi\n";
  for (const auto& r : rows) {
    std::cout << pic::format_double(r.value) << '\t' << r.trials << '\t' << r.acc_mean << "±"
              << r.acc_std << '\t' << r.nmi_mean << "±" << r.nmi_std << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incomplete multi-view clustering via perturbation-minimizing consensus Laplacians"};
  app.require_subcommand(1);

  std::string manifest, out, regularizer = "manifold";
  double per = 0.0;
  double beta_tilde = 0.1;
  std::vector<double> per_list, beta_list;
  std::uint64_t seed = 0;
  long clusters = 0;
  long knn = 9;
  int trials = 20;
  bool timing = false;

  auto* mask = app.add_subcommand("mask", "Apply the PER masking protocol to a complete dataset");
  mask->add_option("--manifest", manifest, "Input manifest")->required();
  mask->add_option("--per", per, "Partial example ratio in [0, 1]")->required();
  mask->add_option("--seed", seed, "Random seed");
  mask->add_option("--out", out, "Output directory")->required();

  auto* cluster = app.add_subcommand("cluster", "Cluster one dataset");
  cluster->add_option("--manifest", manifest, "Input manifest")->required();
  cluster->add_option("--clusters", clusters, "Number of clusters")->required();
  cluster->add_option("--knn", knn, "Adaptive neighbor count");
  cluster->add_option("--beta-tilde", beta_tilde, "Regularizer balance");
  cluster->add_option("--seed", seed, "Random seed");
  cluster->add_option("--regularizer", regularizer, "manifold | identity");
  cluster->add_option("--out", out, "Output directory")->required();
  cluster->add_flag("--timing", timing, "Record wall time in the run record");

  auto* sweep_per = app.add_subcommand("sweep-per", "ACC/NMI over a grid of PER values");
  sweep_per->add_option("--manifest", manifest, "Complete labeled manifest")->required();
  sweep_per->add_option("--per", per_list, "PER grid (default 0 0.1 0.3 0.5 0.7 0.9)");
  sweep_per->add_option("--beta-tilde", beta_tilde, "Regularizer balance");
  sweep_per->add_option("--trials", trials, "Trials per grid point");
  sweep_per->add_option("--seed", seed, "Base seed");
  sweep_per->add_option("--clusters", clusters, "Number of clusters (default: label count)");
  sweep_per->add_option("--knn", knn, "Adaptive neighbor count");
  sweep_per->add_option("--regularizer", regularizer, "manifold | identity");
  sweep_per->add_option("--out", out, "Output directory")->required();
  sweep_per->add_flag("--timing", timing, "Record wall time in run records");

  auto* sweep_beta = app.add_subcommand("sweep-beta", "ACC/NMI over a grid of beta-tilde values");
  sweep_beta->add_option("--manifest", manifest, "Complete labeled manifest")->required();
  sweep_beta->add_option("--beta-tilde", beta_list, "beta-tilde grid (default 1e-4 ... 1e3)");
  sweep_beta->add_option("--per", per, "PER applied in every trial");
  sweep_beta->add_option("--trials", trials, "Trials per grid point");
  sweep_beta->add_option("--seed", seed, "Base seed");
  sweep_beta->add_option("--clusters", clusters, "Number of clusters (default: label count)");
  sweep_beta->add_option("--knn", knn, "Adaptive neighbor count");
  sweep_beta->add_option("--regularizer", regularizer, "manifold | identity");
  sweep_beta->add_option("--out", out, "Output directory")->required();
  sweep_beta->add_flag("--timing", timing, "Record wall time in run records");

  std::string kind = "gaussian_blobs";
  long n = 150;
  long views = 2;
  double noise = 1.0;
  auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic multi-view dataset");
  synth->add_option("--kind", kind, "gaussian_blobs | two_moons_views | ideal_blocks");
  synth->add_option("--n", n, "Number of instances");
  synth->add_option("--clusters", clusters, "Number of clusters")->required();
  synth->add_option("--views", views, "Number of views");
  synth->add_option("--noise", noise, "Noise level");
  synth->add_option("--seed", seed, "Random seed");
  synth->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*mask) {
      const auto path = pic::cmd_mask(manifest, per, seed, out);
      log(LogLevel::info, "wrote " + path.string());
    } else if (*cluster) {
      if (clusters < 1) throw pic::UsageError("--clusters must be at least 1");
      pic::ClusterArgs args;
      args.manifest = manifest;
      args.options.clusters = clusters;
      args.options.k_nn = knn;
      args.options.beta_tilde = beta_tilde;
      args.options.seed = seed;
      args.options.regularizer = parse_regularizer(regularizer);
      args.out = out;
      args.record_timing = timing;
      const auto record = pic::cmd_cluster(args);
      std::cout << pic::to_line(record) << '\n';
    } else if (*sweep_per || *sweep_beta) {
      pic::SweepArgs args;
      args.manifest = manifest;
      args.trials = trials;
      args.seed = seed;
      args.clusters = clusters;
      args.k_nn = knn;
      args.regularizer = parse_regularizer(regularizer);
      args.out = out;
      args.record_timing = timing;
      if (*sweep_per) {
        args.grid = per_list.empty() ? pic::default_per_grid() : per_list;
        args.fixed_beta_tilde = beta_tilde;
        print_sweep("per", pic::cmd_sweep_per(args));
      } else {
        args.grid = beta_list.empty() ? pic::default_beta_grid() : beta_list;
        args.fixed_per = per;
        print_sweep("beta_tilde", pic::cmd_sweep_beta(args));
      }
    } else if (*synth) {
      pic::SynthSpec spec;
      spec.kind = pic::parse_synth_kind(kind);
      spec.n = n;
      spec.clusters = clusters;
      spec.views = views;
      spec.noise = noise;
      spec.seed = seed;
      const auto path = pic::cmd_synth(spec, out);
      log(LogLevel::info, "wrote " + path.string());
    }
  } catch (const pic::UsageError& e) {
    log(LogLevel::error, std::string("usage error: ") + e.what());
    return 1;
  } catch (const pic::DataError& e) {
    log(LogLevel::error, std::string("data error: ") + e.what());
    return 2;
  } catch (const pic::NumericalError& e) {
    log(LogLevel::error, std::string("numerical failure: ") + e.what());
    return 3;
  } catch (const std::exception& e) {
    log(LogLevel::error, std::string("error: ") + e.what());
    return 2;
  }
  return 0;
}
