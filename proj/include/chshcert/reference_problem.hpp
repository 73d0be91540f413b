#pragma once

// The certification problem for max(eps+, eps-) over the reduced 5-box and the
// end-to-end check of the reference example.

#include <optional>
#include <string>

#include "chshcert/bounds.hpp"
#include "chshcert/certifier.hpp"

namespace chshcert {

inline constexpr const char *kEpsilonObjective = "epsilon_rho_max";
inline constexpr const char *kSinSumObjective = "sin_sum";

/// [0, pi/2]^5.
AxisBox reduced_domain();

/// The corner cube around the amplitude-damping point, as an exclusion box.
AxisBox excluded_cube_box();

/// [0, pi/2]^5 with a1t, b1t restricted to [pi/4, pi/2].
AxisBox slice_domain();

/// x -> max(eps+, eps-)(x); parameters are validated once up front.
Objective epsilon_objective(const StateFamilyParamsd &p);

/// x -> sin(sum x_i).
Objective sin_sum_objective();

struct EpsilonRunOptions {
  StateFamilyParamsd params = reference_parameters<double>();
  IotaReading iota = IotaReading::nominal;
  AxisBox domain = reduced_domain();
  bool exclude_cube = true;
  double threshold = 1;
  double initial_delta = std::numbers::pi / 16;
  int max_depth = 30;
  std::uint64_t budget = 1'000'000'000;
  double fp_margin = 1e-9;
  int workers = 1;
};

CertProblem epsilon_problem(const EpsilonRunOptions &o);

/// Rebuilds the objective named in a stored configuration.
CertProblem problem_from_config(const CertConfig &c);

std::string to_string(IotaReading r);
IotaReading iota_reading_from_string(const std::string &s);

struct ReferenceReproduction {
  CertificateReport certificate;
  ResidualCertificated residual;
  double chsh = 0;
  double iota = 0;
  bool verified = false;
};

/// Certifies max(eps+, eps-) <= 1 outside the excluded cube and checks the
/// residual certificate inside it. With `previous`, continues that run.
ReferenceReproduction reproduce_reference_example(const EpsilonRunOptions &o,
                                          const std::optional<CertificateReport> &previous = {});

} // namespace chshcert
