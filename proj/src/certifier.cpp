#include "chshcert/certifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "chshcert/types.hpp"

namespace chshcert {

namespace {

// Slack for box-in-exclusion tests; grid coordinates are sums of rounded
// multiples of the initial edge.
constexpr double kGeomTol = 1e-12;

} // namespace

double HyperBox::volume() const { return std::pow(2 * half_edge, dim()); }

double AxisBox::volume() const { return (upper - lower).prod(); }

bool AxisBox::contains(const Point &x) const {
  return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

bool AxisBox::contains(const HyperBox &b, double tol) const {
  return (b.center.array() - b.half_edge >= lower.array() - tol).all() &&
         (b.center.array() + b.half_edge <= upper.array() + tol).all();
}

bool AxisBox::overlaps(const HyperBox &b) const {
  return (b.center.array() - b.half_edge < upper.array() - kGeomTol).all() &&
         (b.center.array() + b.half_edge > lower.array() + kGeomTol).all();
}

std::string to_string(CertStatus s) {
  switch (s) {
  case CertStatus::certified:
    return "certified";
  case CertStatus::refuted:
    return "refuted";
  case CertStatus::budget_exceeded:
    return "budget-exceeded";
  }
  return "unknown";
}

CertStatus cert_status_from_string(const std::string &s) {
  if (s == "certified")
    return CertStatus::certified;
  if (s == "refuted")
    return CertStatus::refuted;
  if (s == "budget-exceeded")
    return CertStatus::budget_exceeded;
  throw InvalidParameter("unknown certificate status: " + s);
}

double CertificateReport::frontier_volume() const {
  double v = 0;
  for (const auto &b : frontier)
    v += b.volume();
  return v;
}

double box_upper_bound(double f_center, double half_edge, int n, double lipschitz) {
  return f_center + std::sqrt(double(n)) * half_edge * lipschitz;
}

double min_grid_step(double gap, double lipschitz, int n) {
  detail::require(gap > 0 && lipschitz > 0 && n > 0,
                  "min_grid_step: gap, lipschitz and n must be positive");
  return 2 * gap / (lipschitz * std::sqrt(double(n)));
}

std::vector<HyperBox> subdivide(const HyperBox &b) {
  const int n = b.dim();
  const double h = b.half_edge / 2;
  std::vector<HyperBox> out;
  out.reserve(std::size_t(1) << n);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    HyperBox c{b.center, h, b.depth + 1};
    for (int i = 0; i < n; ++i)
      c.center(i) += (mask >> i & 1u) ? h : -h;
    out.push_back(std::move(c));
  }
  return out;
}

double initial_grid_edge(const AxisBox &domain, double delta0) {
  detail::require(delta0 > 0, "initial_delta must be positive");
  const Point sides = domain.upper - domain.lower;
  detail::require((sides.array() > 0).all(), "domain sides must be positive");
  const double shortest = sides.minCoeff();
  for (long k = 1; k <= 100'000; ++k) {
    const double e = shortest / double(k);
    if (e > delta0 * (1 + 1e-12))
      continue;
    bool divides = true;
    for (int i = 0; i < sides.size() && divides; ++i) {
      const double m = sides(i) / e;
      divides = std::abs(m - std::round(m)) <= 1e-9;
    }
    if (divides)
      return e;
  }
  throw InvalidParameter("domain sides are incommensurate with any grid edge <= initial_delta");
}

std::vector<HyperBox> initial_grid(const AxisBox &domain, double delta0) {
  const double e = initial_grid_edge(domain, delta0);
  const int n = domain.dim();
  std::vector<long> counts(n);
  long total = 1;
  for (int i = 0; i < n; ++i) {
    counts[i] = std::lround((domain.upper(i) - domain.lower(i)) / e);
    total *= counts[i];
  }
  std::vector<HyperBox> out;
  out.reserve(total);
  std::vector<long> idx(n, 0);
  for (long t = 0; t < total; ++t) {
    HyperBox b{Point(n), e / 2, 0};
    for (int i = 0; i < n; ++i)
      b.center(i) = domain.lower(i) + (double(idx[i]) + 0.5) * e;
    out.push_back(std::move(b));
    for (int i = n - 1; i >= 0; --i) {
      if (++idx[i] < counts[i])
        break;
      idx[i] = 0;
    }
  }
  return out;
}

void validate(const CertConfig &c) {
  const int n = c.domain.dim();
  detail::require(n >= 1 && n <= kMaxDimension, "domain dimension must lie in [1, 8]");
  detail::require(c.domain.upper.size() == n, "domain bounds differ in dimension");
  detail::require(c.lipschitz >= 0, "lipschitz constant must be nonnegative");
  detail::require(c.fp_margin >= 0, "fp_margin must be nonnegative");
  detail::require(c.initial_delta > 0, "initial_delta must be positive");
  detail::require(c.max_depth >= 0, "max_depth must be nonnegative");
  detail::require(c.workers >= 1, "workers must be at least 1");
  for (const auto &ex : c.exclusions)
    detail::require(ex.dim() == n && ex.upper.size() == n,
                    "exclusion dimension differs from the domain");
}

namespace {

struct TaskOutcome {
  CertCounters counters;
  std::vector<HyperBox> leftover;
  bool refuted = false;
  Point witness;
  double witness_value = 0;
};

struct SharedState {
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> refuted_at{SIZE_MAX};
  std::atomic<std::uint64_t> processed{0};
  std::atomic<bool> budget_hit{false};
};

void lower_to(std::atomic<std::size_t> &a, std::size_t v) {
  std::size_t cur = a.load();
  while (v < cur && !a.compare_exchange_weak(cur, v)) {
  }
}

// Depth-first search of one initial box; stops early when a refutation with a
// smaller task index is known, or when the global budget is spent.
void run_task(const CertProblem &p, std::size_t k, const HyperBox &root, SharedState &st,
              TaskOutcome &out) {
  const CertConfig &c = p.config;
  const int n = c.domain.dim();
  const double limit = c.threshold - c.fp_margin;
  std::vector<HyperBox> stack{root};
  auto &cnt = out.counters;

  while (!stack.empty()) {
    if (st.refuted_at.load(std::memory_order_relaxed) < k)
      return;
    if (st.processed.fetch_add(1, std::memory_order_relaxed) >= c.budget) {
      st.budget_hit = true;
      out.leftover.insert(out.leftover.end(), stack.rbegin(), stack.rend());
      return;
    }
    HyperBox box = std::move(stack.back());
    stack.pop_back();
    ++cnt.boxes_processed;
    cnt.max_depth_reached = std::max(cnt.max_depth_reached, box.depth);

    bool inside = false, center_excluded = false;
    for (const auto &ex : c.exclusions) {
      if (ex.contains(box, kGeomTol)) {
        inside = true;
        break;
      }
      if (ex.overlaps(box) && ex.contains(box.center))
        center_excluded = true;
    }
    if (inside) {
      ++cnt.boxes_excluded;
      cnt.excluded_volume += box.volume();
      continue;
    }
    // A box straddling an exclusion with its center inside is split without
    // evaluation; otherwise the usual rule applies to the whole box.
    if (!center_excluded) {
      const double f = p.objective(box.center);
      ++cnt.evaluations;
      cnt.max_center_value = std::max(cnt.max_center_value, f);
      if (!(f <= limit)) {
        out.refuted = true;
        out.witness = box.center;
        out.witness_value = f;
        lower_to(st.refuted_at, k);
        return;
      }
      if (box_upper_bound(f, box.half_edge, n, c.lipschitz) <= limit) {
        ++cnt.boxes_eliminated;
        cnt.eliminated_volume += box.volume();
        continue;
      }
    }
    if (box.depth >= c.max_depth) {
      out.leftover.push_back(std::move(box));
      continue;
    }
    auto children = subdivide(box);
    for (auto it = children.rbegin(); it != children.rend(); ++it)
      stack.push_back(std::move(*it));
  }
}

void merge(CertCounters &into, const CertCounters &c) {
  into.boxes_processed += c.boxes_processed;
  into.evaluations += c.evaluations;
  into.boxes_eliminated += c.boxes_eliminated;
  into.boxes_excluded += c.boxes_excluded;
  into.max_depth_reached = std::max(into.max_depth_reached, c.max_depth_reached);
  into.max_center_value = std::max(into.max_center_value, c.max_center_value);
  into.eliminated_volume += c.eliminated_volume;
  into.excluded_volume += c.excluded_volume;
}

// Tasks are claimed in index order; a refutation in task k cancels only tasks
// after k, so the aggregate over tasks 0..k does not depend on scheduling.
CertificateReport run(const CertProblem &p, const std::vector<HyperBox> &tasks,
                      const CertCounters &base) {
  const CertConfig &c = p.config;
  std::vector<TaskOutcome> outcomes(tasks.size());
  std::vector<char> started(tasks.size(), 0);
  SharedState st;

  auto worker = [&] {
    for (;;) {
      const std::size_t k = st.next.fetch_add(1);
      if (k >= tasks.size())
        return;
      if (k > st.refuted_at.load() || st.budget_hit.load())
        continue;
      started[k] = 1;
      run_task(p, k, tasks[k], st, outcomes[k]);
    }
  };
  if (c.workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < c.workers; ++w)
      pool.emplace_back(worker);
  }

  CertificateReport r;
  r.config = c;
  r.config_hash = config_hash(c);
  r.counters = base;
  const std::size_t k_ref = st.refuted_at.load();
  if (k_ref != SIZE_MAX) {
    for (std::size_t k = 0; k <= k_ref; ++k)
      merge(r.counters, outcomes[k].counters);
    r.status = CertStatus::refuted;
    r.witness = outcomes[k_ref].witness;
    r.witness_value = outcomes[k_ref].witness_value;
    return r;
  }
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    merge(r.counters, outcomes[k].counters);
    if (!started[k])
      r.frontier.push_back(tasks[k]);
    else
      r.frontier.insert(r.frontier.end(), outcomes[k].leftover.begin(),
                        outcomes[k].leftover.end());
  }
  r.status = r.frontier.empty() ? CertStatus::certified : CertStatus::budget_exceeded;
  return r;
}

} // namespace

CertificateReport certify(const CertProblem &p) {
  validate(p.config);
  return run(p, initial_grid(p.config.domain, p.config.initial_delta), CertCounters{});
}

CertificateReport resume(const CertProblem &p, const CertificateReport &previous) {
  validate(p.config);
  if (config_hash(p.config) != previous.config_hash)
    throw ConfigMismatch("checkpoint was produced by a different configuration");
  if (previous.status == CertStatus::refuted)
    return previous;
  CertCounters base = previous.counters;
  return run(p, previous.frontier, base);
}

} // namespace chshcert
