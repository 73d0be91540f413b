#include "chshcert/threshold_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "chshcert/chsh_model.hpp"

namespace chshcert {

namespace {

struct Evaluated {
  double value;
  Branch branch;
};

Evaluated evaluate(const ReducedPointd &x, const StateFamilyParamsd &p, BranchChoice choice) {
  const auto t = detail::rho_terms(x, p);
  switch (choice) {
  case BranchChoice::plus:
    return {t.even + t.odd, Branch::plus};
  case BranchChoice::minus:
    return {t.even - t.odd, Branch::minus};
  case BranchChoice::both:
    break;
  }
  return {t.even + std::abs(t.odd), t.odd >= 0 ? Branch::plus : Branch::minus};
}

// Compass search with first-improvement moves, clamped to [0, pi/2]^5. The
// step doubles after a successful sweep and halves after a failed one.
std::pair<ReducedPointd, double> ascend(ReducedPointd x, double step, const StateFamilyParamsd &p,
                                        BranchChoice choice, const MaximizerConfig &cfg) {
  const double hi = half_pi<double>();
  const double max_step = step;
  double fx = evaluate(x, p, choice).value;
  for (int sweep = 0; sweep < cfg.max_sweeps && step >= cfg.min_step; ++sweep) {
    bool improved = false;
    for (int i = 0; i < 5; ++i) {
      for (double dir : {1.0, -1.0}) {
        ReducedPointd y = x;
        y(i) = std::clamp(x(i) + dir * step, 0.0, hi);
        if (y(i) == x(i))
          continue;
        const double fy = evaluate(y, p, choice).value;
        // Gains at rounding level are noise and can stall the search.
        if (fy > fx + 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(fx))) {
          x = y;
          fx = fy;
          improved = true;
        }
      }
    }
    step = improved ? std::min(2 * step, max_step) : step / 2;
  }
  return {x, fx};
}

} // namespace

MaximizeResult maximize_epsilon(const StateFamilyParamsd &p, BranchChoice branch,
                                const MaximizerConfig &cfg) {
  validate(p);
  detail::require(cfg.grid_points >= 2, "maximizer grid needs at least 2 points per axis");
  detail::require(cfg.top_k >= 0 && cfg.random_starts >= 0, "start counts must be nonnegative");
  detail::require(cfg.min_step > 0, "maximizer min_step must be positive");
  detail::require(cfg.max_sweeps > 0, "maximizer max_sweeps must be positive");

  const int g = cfg.grid_points;
  const double spacing = half_pi<double>() / (g - 1);
  int total = 1;
  for (int i = 0; i < 5; ++i)
    total *= g;

  std::vector<double> values(total);
  auto grid_point = [&](int idx) {
    ReducedPointd x;
    for (int i = 4; i >= 0; --i, idx /= g)
      x(i) = (idx % g) * spacing;
    return x;
  };
  for (int t = 0; t < total; ++t)
    values[t] = evaluate(grid_point(t), p, branch).value;

  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  const int k = std::min(cfg.top_k, total);
  std::partial_sort(order.begin(), order.begin() + std::max(k, 1), order.end(),
                    [&](int a, int b) { return values[a] > values[b] || (values[a] == values[b] && a < b); });

  MaximizeResult best;
  best.argmax = grid_point(order[0]);
  best.eps = values[order[0]];

  auto consider = [&](const ReducedPointd &x, double v) {
    if (v > best.eps) {
      best.eps = v;
      best.argmax = x;
    }
  };
  for (int s = 0; s < k; ++s) {
    const auto [x, v] = ascend(grid_point(order[s]), spacing, p, branch, cfg);
    consider(x, v);
  }
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0, half_pi<double>());
  for (int s = 0; s < cfg.random_starts; ++s) {
    ReducedPointd x0;
    for (int i = 0; i < 5; ++i)
      x0(i) = unit(rng);
    consider(x0, evaluate(x0, p, branch).value);
    const auto [x, v] = ascend(x0, spacing, p, branch, cfg);
    consider(x, v);
  }
  best.branch = evaluate(best.argmax, p, branch).branch;
  return best;
}

PcResult min_over_pc(double nu, const PcSearchConfig &cfg) {
  detail::require(nu >= 0 && nu <= 1, "nu must lie in [0, 1]");
  detail::require(cfg.tolerance > 0, "p_c tolerance must be positive");
  detail::require(cfg.bracket_points >= 2, "bracketing grid needs at least 2 points");

  PcResult best{0, std::numeric_limits<double>::infinity(), false};
  auto f = [&](double pc) {
    const double v = maximize_epsilon({nu, pc, 0.5}, BranchChoice::both, cfg.maximizer).eps;
    if (v < best.eps || (v == best.eps && pc < best.pc_star)) {
      best.eps = v;
      best.pc_star = pc;
    }
    return v;
  };
  auto golden = [&](double a, double b) {
    const double inv_phi = (std::sqrt(5.0) - 1) / 2;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d), lowest = std::min(fc, fd);
    while (b - a > cfg.tolerance) {
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = f(c);
        lowest = std::min(lowest, fc);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = f(d);
        lowest = std::min(lowest, fd);
      }
    }
    return lowest;
  };

  const double f0 = f(0), f1 = f(1);
  const double interior = golden(0, 1);
  // An interior result worse than an endpoint means the objective is not
  // unimodal in p_c; rescan on a grid and refine around its best point.
  if (std::min(f0, f1) < interior) {
    best.used_bracketing = true;
    const int m = cfg.bracket_points;
    int arg = 0;
    double fmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= m; ++i) {
      const double v = f(double(i) / m);
      if (v < fmin) {
        fmin = v;
        arg = i;
      }
    }
    golden(double(std::max(arg - 1, 0)) / m, double(std::min(arg + 1, m)) / m);
  }
  return best;
}

int scan_length(const ScanConfig &cfg) {
  detail::require(cfg.nu_step > 0, "nu_step must be positive");
  detail::require(cfg.nu_start >= 0 && cfg.nu_end <= 1 && cfg.nu_start <= cfg.nu_end,
                  "scan range must satisfy 0 <= nu_start <= nu_end <= 1");
  return static_cast<int>(std::floor((cfg.nu_end - cfg.nu_start) / cfg.nu_step + 1e-9)) + 1;
}

ScanResult scan(const ScanConfig &cfg) {
  detail::require(cfg.accept_tolerance >= 0, "accept tolerance must be nonnegative");
  const int n = scan_length(cfg);
  ScanResult out;
  bool failed = false;
  for (int k = 0; k < n; ++k) {
    ScanRow row;
    row.nu = cfg.nu_start + k * cfg.nu_step;
    const PcResult r = min_over_pc(row.nu, cfg.pc);
    row.best_pc = r.pc_star;
    row.eps_max = r.eps;
    row.chsh = chsh_score(row.nu);
    row.certified = r.eps <= 1 + cfg.accept_tolerance;
    out.rows.push_back(row);
    if (!row.certified && !failed) {
      failed = true;
      if (k > 0 && out.rows[k - 1].certified)
        out.candidate = out.rows[k - 1];
      if (!cfg.full)
        break;
    }
  }
  if (!failed && !out.rows.empty())
    out.candidate = out.rows.back();
  return out;
}

} // namespace chshcert
