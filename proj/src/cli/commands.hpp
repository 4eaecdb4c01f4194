#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "skewspec/cli.hpp"

namespace skewspec::cli {

struct VerifyJacobianOptions {
  int p = 1;
  int trials = 10;
  double gamma = 1.0;
  std::vector<double> spectrum;  // x1,y1,...; overrides the random trials
  double tolerance = 1e-8;
};

struct FeketeOptions {
  int n = 20;
  std::string mode = "anti";
  std::optional<double> gamma;  // anti: 1, commuting: 1/2
  int restarts = 8;
  int max_iters = 50000;
};

struct SampleOptions {
  int p = 1;
  double gamma = 1.0;
  int samples = 1000;
  int burn_in = -1;
  int thinning = -1;
  int ks_resolution = 512;
};

struct DensityOptions {
  std::string points;  // path, or "-" for stdin
  double gamma = 1.0;
};

struct KboundOptions {
  int p = 1;
};

/// What every command receives besides its own options.
struct RunContext {
  std::uint64_t seed = 0;
  int threads = 1;
  std::optional<std::filesystem::path> out_dir;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  RunManifest manifest;
};

int cmd_verify_jacobian(const VerifyJacobianOptions& o, RunContext& ctx);
int cmd_fekete(const FeketeOptions& o, RunContext& ctx);
int cmd_sample(const SampleOptions& o, RunContext& ctx);
int cmd_density(const DensityOptions& o, RunContext& ctx);
int cmd_kbound(const KboundOptions& o, RunContext& ctx);

}  // namespace skewspec::cli
