#pragma once

// Outer loop of the threshold search: for each nu, minimise over p_c the
// numerically maximised eps bound.

#include <cstdint>
#include <optional>
#include <vector>

#include "chshcert/bounds.hpp"

namespace chshcert {

enum class BranchChoice { plus, minus, both };

struct MaximizerConfig {
  int grid_points = 9;
  int top_k = 8;
  int random_starts = 8;
  std::uint64_t seed = 1;
  double min_step = 1e-8;
  int max_sweeps = 10000;
};

struct MaximizeResult {
  double eps = 0;
  ReducedPointd argmax = ReducedPointd::Zero();
  Branch branch = Branch::plus;
};

/// Grid seeding followed by projected compass search from the best grid
/// points and seeded random starts.
MaximizeResult maximize_epsilon(const StateFamilyParamsd &p, BranchChoice branch,
                                const MaximizerConfig &cfg = {});

struct PcSearchConfig {
  double tolerance = 1e-6;
  int bracket_points = 100;
  MaximizerConfig maximizer;
};

struct PcResult {
  double pc_star = 0;
  double eps = 0;
  bool used_bracketing = false;
};

/// Golden-section search over p_c in [0, 1]. Falls back to a bracketing grid
/// when the result is worse than an endpoint.
PcResult min_over_pc(double nu, const PcSearchConfig &cfg = {});

struct ScanConfig {
  double nu_start = 0;
  double nu_end = 0.1;
  double nu_step = 0.001;
  double accept_tolerance = 1e-9;
  bool full = false;
  PcSearchConfig pc;
};

struct ScanRow {
  double nu = 0;
  double best_pc = 0;
  double eps_max = 0;
  double chsh = 0;
  bool certified = false; // eps_max <= 1 numerically; not a certificate
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::optional<ScanRow> candidate;
};

/// Number of nu values in [nu_start, nu_end] on the nu_step lattice.
int scan_length(const ScanConfig &cfg);

/// Stops after the first row with eps_max > 1 unless cfg.full is set.
ScanResult scan(const ScanConfig &cfg);

} // namespace chshcert
