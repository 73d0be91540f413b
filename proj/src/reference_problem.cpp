#include "chshcert/reference_problem.hpp"

#include <cmath>

#include "chshcert/chsh_model.hpp"

namespace chshcert {

namespace {

Point filled(double v) { return Point::Constant(5, v); }

double param(const CertConfig &c, const std::string &key) {
  for (const auto &[k, v] : c.objective_params)
    if (k == key)
      return v;
  throw InvalidParameter("configuration lacks objective parameter " + key);
}

} // namespace

AxisBox reduced_domain() { return {filled(0), filled(half_pi<double>())}; }

AxisBox excluded_cube_box() {
  const auto cube = excluded_cube<double>();
  return {cube.lower, cube.upper};
}

AxisBox slice_domain() {
  AxisBox d = reduced_domain();
  d.lower(kA1) = d.lower(kB1) = std::numbers::pi / 4;
  return d;
}

Objective epsilon_objective(const StateFamilyParamsd &p) {
  validate(p);
  return [p](const Point &x) {
    const ReducedPointd r = x;
    const auto t = detail::rho_terms(r, p);
    return t.even + std::abs(t.odd);
  };
}

Objective sin_sum_objective() {
  return [](const Point &x) { return std::sin(x.sum()); };
}

CertProblem epsilon_problem(const EpsilonRunOptions &o) {
  CertConfig c;
  c.objective_id = kEpsilonObjective;
  c.objective_params = {{"nu", o.params.nu}, {"p_c", o.params.p_c}, {"q", o.params.q}};
  c.domain = o.domain;
  c.lipschitz = iota_sup(o.params, o.iota);
  c.threshold = o.threshold;
  if (o.exclude_cube)
    c.exclusions.push_back(excluded_cube_box());
  c.fp_margin = o.fp_margin;
  c.initial_delta = o.initial_delta;
  c.max_depth = o.max_depth;
  c.budget = o.budget;
  c.workers = o.workers;
  return {epsilon_objective(o.params), c};
}

CertProblem problem_from_config(const CertConfig &c) {
  if (c.objective_id == kEpsilonObjective) {
    const StateFamilyParamsd p{param(c, "nu"), param(c, "p_c"), param(c, "q")};
    return {epsilon_objective(p), c};
  }
  if (c.objective_id == kSinSumObjective)
    return {sin_sum_objective(), c};
  throw InvalidParameter("unknown objective: " + c.objective_id);
}

std::string to_string(IotaReading r) {
  switch (r) {
  case IotaReading::nominal:
    return "nominal";
  case IotaReading::tight:
    return "tight";
  case IotaReading::rigorous:
    return "rigorous";
  }
  return "unknown";
}

IotaReading iota_reading_from_string(const std::string &s) {
  if (s == "nominal")
    return IotaReading::nominal;
  if (s == "tight")
    return IotaReading::tight;
  if (s == "rigorous")
    return IotaReading::rigorous;
  throw InvalidParameter("unknown iota reading: " + s);
}

ReferenceReproduction reproduce_reference_example(const EpsilonRunOptions &o,
                                          const std::optional<CertificateReport> &previous) {
  const CertProblem problem = epsilon_problem(o);
  ReferenceReproduction out;
  out.certificate = previous ? resume(problem, *previous) : certify(problem);
  out.residual = residual_cube_certificate(o.params);
  out.chsh = chsh_score(o.params.nu);
  out.iota = problem.config.lipschitz;
  out.verified = out.certificate.status == CertStatus::certified && out.residual.valid &&
                 o.exclude_cube && o.threshold <= 1;
  return out;
}

} // namespace chshcert
