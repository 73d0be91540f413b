#pragma once

// Lipschitz branch-and-bound: proves f <= threshold on an axis-aligned box
// (minus exclusion boxes) from center evaluations, or exhibits a point where
// it fails.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace chshcert {

constexpr int kMaxDimension = 8;

/// Stack-allocated point of dimension at most kMaxDimension.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDimension, 1>;

/// prod_i [center_i - half_edge, center_i + half_edge].
struct HyperBox {
  Point center;
  double half_edge = 0;
  int depth = 0;

  int dim() const { return static_cast<int>(center.size()); }
  double volume() const;
};

struct AxisBox {
  Point lower;
  Point upper;

  int dim() const { return static_cast<int>(lower.size()); }
  double volume() const;
  bool contains(const Point &x) const;
  bool contains(const HyperBox &b, double tol = 0) const;
  bool overlaps(const HyperBox &b) const;
};

using Objective = std::function<double(const Point &)>;

enum class CertStatus { certified, refuted, budget_exceeded };

std::string to_string(CertStatus s);
CertStatus cert_status_from_string(const std::string &s);

/// Everything except the objective itself; objective_id and objective_params
/// identify it in reports and checkpoints.
struct CertConfig {
  std::string objective_id;
  std::vector<std::pair<std::string, double>> objective_params;
  AxisBox domain;
  double lipschitz = 0;
  double threshold = 1;
  std::vector<AxisBox> exclusions;
  double fp_margin = 1e-9;
  double initial_delta = 0.1;
  int max_depth = 30;
  std::uint64_t budget = 1'000'000'000;
  int workers = 1;
};

struct CertProblem {
  Objective objective;
  CertConfig config;
};

struct CertCounters {
  std::uint64_t boxes_processed = 0;
  std::uint64_t evaluations = 0;
  std::uint64_t boxes_eliminated = 0;
  std::uint64_t boxes_excluded = 0;
  int max_depth_reached = 0;
  double max_center_value = -std::numeric_limits<double>::infinity();
  double eliminated_volume = 0;
  double excluded_volume = 0;
};

struct CertificateReport {
  CertStatus status = CertStatus::certified;
  CertCounters counters;
  std::optional<Point> witness;
  std::optional<double> witness_value;
  std::vector<HyperBox> frontier;
  CertConfig config;
  std::string config_hash;

  double frontier_volume() const;
};

/// f(p) + sqrt(n) h iota.
double box_upper_bound(double f_center, double half_edge, int n, double lipschitz);

/// 2 G / (iota sqrt(n)): the grid step below which every box with gap G is
/// eliminated.
double min_grid_step(double gap, double lipschitz, int n);

/// The 2^n children of half the edge, in binary order of the sign pattern.
std::vector<HyperBox> subdivide(const HyperBox &b);

/// Largest edge <= delta0 dividing every side of the domain.
double initial_grid_edge(const AxisBox &domain, double delta0);

std::vector<HyperBox> initial_grid(const AxisBox &domain, double delta0);

void validate(const CertConfig &c);

/// FNV-1a 64 of the canonical config, excluding budget and worker count.
std::string config_hash(const CertConfig &c);

CertificateReport certify(const CertProblem &p);

/// Continues from the frontier of a budget-exceeded report. Throws
/// ConfigMismatch when the hash of p.config differs from the stored one.
CertificateReport resume(const CertProblem &p, const CertificateReport &previous);

} // namespace chshcert
