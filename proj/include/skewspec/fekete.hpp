#pragma once

#include <array>
#include <span>
#include <vector>

#include "skewspec/optimize.hpp"
#include "skewspec/spectrum.hpp"

namespace skewspec {

/// Best configuration found for rho_n (n = 2p) by minimizing tau.
struct FeketeResult {
  SkewSpectrum points;  // ascending in x
  double tau_final = 0.0;
  double grad_norm_final = 0.0;
  int iterations = 0;
  double k_bound = 0.0;
  bool converged = false;
  int best_restart = 0;
  std::vector<TraceSample> trace;                        // of the best restart
  std::vector<std::vector<TraceSample>> restart_traces;  // every restart, in order
  double tau_initial = 0.0;                              // tau of the grid start
};

/// First p points of the integer grid {1..q}^2 in row-major order, q minimal
/// with q^2 >= p. tau of the result is at most n^2.
SkewSpectrum grid_initialization(int p);

/// K^2/2 - (3p + 4p^2) log K - (p^2/2) log 400 - 4p^2.
double k_bound_lhs(double k, int p);

/// Smallest K >= 3p with k_bound_lhs(K, p) > 0, to 1e-6. Every configuration
/// with tau <= 4p^2 lies in the disk of radius K.
double solve_k_bound(int p);

/// Projected gradient descent on tau from the grid start plus cfg.restarts
/// log-normally perturbed starts; returns the lowest tau (ties: lowest restart).
FeketeResult minimize_tau(int p, const OptimizerConfig& cfg);

/// minimize_tau(p).points scaled by 1/sqrt(p).
SkewSpectrum fekete_set(int p, const OptimizerConfig& cfg);
SkewSpectrum fekete_set(const FeketeResult& maximizer);

struct CommutingResult {
  std::vector<std::array<double, 2>> points;
  double value_final = 0.0;  // -log kappa_n (normalization dropped)
  double grad_norm_final = 0.0;
  int iterations = 0;
  bool converged = false;
  int best_restart = 0;
  std::vector<TraceSample> trace;
};

/// Maximizer of kappa_n for commuting pairs (d = 2): minimizes
/// gamma sum |l|^2 - sum_{i<j} log |l_i - l_j|^2 on the box of half-width 4 sqrt(n).
CommutingResult minimize_commuting(int n, double gamma, const OptimizerConfig& cfg);

struct SpacingStats {
  double nn_mean = 0.0;
  double nn_cv = 0.0;
  double max_norm = 0.0;
};

/// Nearest-neighbour distance mean and coefficient of variation, and the
/// largest point norm. Throws std::invalid_argument for fewer than two points.
SpacingStats spacing_stats(std::span<const Point> points);
SpacingStats spacing_stats(std::span<const std::array<double, 2>> points);

}  // namespace skewspec
