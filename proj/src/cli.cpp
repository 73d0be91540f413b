#include "chshcert/cli.hpp"

#include <charconv>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chshcert/checkpoint.hpp"
#include "chshcert/chsh_model.hpp"
#include "chshcert/report.hpp"
#include "chshcert/sampling.hpp"

namespace chshcert {

namespace {

struct Options {
  double nu = 0.061;
  double pc = 0.61381508;
  double q = 0.5;
  std::string branch = "both";
  double threshold = 1;
  double delta0 = std::numbers::pi / 16;
  int max_depth = 30;
  std::uint64_t budget = 1'000'000'000;
  double fp_margin = 1e-9;
  int workers = 1;
  std::uint64_t seed = 1;
  std::string checkpoint;
  std::string out;
  std::string format = "human";
  std::string iota = "nominal";
  double lower = 0;
  double upper = 0.1;
  double step = 0.001;
  bool full = false;
  bool timestamps = false;
  bool slice = false;
  bool no_exclusion = false;
  std::vector<double> point;
  int samples = 10000;
};

// Shortest text that parses back to the same double.
std::string exact(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

Document flags_echo(const CLI::App *sub) {
  Document flags = Document::object();
  for (const CLI::Option *opt : sub->get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help")
      continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto &r : opt->results())
        value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    flags[opt->get_lnames().front()] = value;
  }
  return flags;
}

StateFamilyParamsd state_params(const Options &o) { return {o.nu, o.pc, o.q}; }

EpsilonRunOptions run_options(const Options &o) {
  EpsilonRunOptions r;
  r.params = state_params(o);
  r.iota = iota_reading_from_string(o.iota);
  r.domain = o.slice ? slice_domain() : reduced_domain();
  r.exclude_cube = !o.no_exclusion;
  r.threshold = o.threshold;
  r.initial_delta = o.delta0;
  r.max_depth = o.max_depth;
  r.budget = o.budget;
  r.fp_margin = o.fp_margin;
  r.workers = o.workers;
  return r;
}

int exit_code(CertStatus s) {
  switch (s) {
  case CertStatus::certified:
    return kExitOk;
  case CertStatus::refuted:
    return kExitRefuted;
  case CertStatus::budget_exceeded:
    return kExitBudget;
  }
  return kExitUsage;
}

Document point_json(const ReducedPointd &x) {
  return Document(std::vector<double>(x.data(), x.data() + 5));
}

Document run_score(const Options &o) {
  const double s = chsh_score(o.nu);
  return {{"nu", o.nu}, {"chsh", s}, {"comparison_fidelity_bound", comparison_fidelity_bound(s)}};
}

Document run_eval(const Options &o) {
  detail::require(o.point.size() == 5, "--point takes five values");
  const ReducedPointd x = Eigen::Map<const ReducedPointd>(o.point.data());
  const auto p = state_params(o);
  const double plus = epsilon_rho(x, p, Branch::plus);
  const double minus = epsilon_rho(x, p, Branch::minus);
  Document res;
  res["point"] = point_json(x);
  res["eps_plus"] = plus;
  res["eps_minus"] = minus;
  res["eps_max"] = std::max(plus, minus);
  auto grad = [&](Branch b) { return point_json(grad_epsilon_rho(x, p, b)); };
  if (o.branch != "minus")
    res["grad_plus"] = grad(Branch::plus);
  if (o.branch != "plus")
    res["grad_minus"] = grad(Branch::minus);
  res["iota_sup"] = iota_sup(p, iota_reading_from_string(o.iota));
  res["in_excluded_cube"] = in_excluded_cube(x);
  if (in_excluded_cube(x))
    res["residual_majorant"] = residual_majorant(x, residual_matrix(p));
  return res;
}

Document run_oracle(const Options &o, bool &violated) {
  detail::require(o.samples >= 1, "--samples must be positive");
  const auto p = state_params(o);
  std::mt19937_64 rng(o.seed);
  int violations = 0;
  double worst = -std::numeric_limits<double>::infinity();
  double f_max = 0, f_min = 1;
  for (int s = 0; s < o.samples; ++s) {
    Strategyd strat;
    for (int r = 0; r < 3; ++r) {
      strat.alice[r] = random_extremal_params<double>(rng);
      strat.bob[r] = random_extremal_params<double>(rng);
    }
    const double f = oracle_fidelity(p, strat);
    const auto red = reduce_strategy(strat);
    const double gap = 4 * f - 1 - epsilon_rho_max(red.point, p);
    worst = std::max(worst, gap);
    violations += gap > 1e-9;
    f_max = std::max(f_max, f);
    f_min = std::min(f_min, f);
  }
  violated = violations > 0;
  return {{"samples", o.samples},     {"violations", violations},
          {"max_gap", worst},         {"max_fidelity", f_max},
          {"min_fidelity", f_min},    {"trivial_floor", 0.5}};
}

Document certificate_result(const CertificateReport &r) {
  Document res;
  res["verdict"] = to_string(r.status);
  res["iota_sup"] = r.config.lipschitz;
  if (r.config.objective_id == kEpsilonObjective) {
    StateFamilyParamsd p;
    for (const auto &[k, v] : r.config.objective_params) {
      if (k == "nu")
        p.nu = v;
      else if (k == "p_c")
        p.p_c = v;
      else if (k == "q")
        p.q = v;
    }
    res["lambda_max"] = residual_cube_certificate(p).lambda_max;
    res["chsh"] = chsh_score(p.nu);
  }
  res["certificate"] = report_to_json(r);
  return res;
}

void maybe_checkpoint(const Options &o, const CertificateReport &r) {
  if (!o.checkpoint.empty())
    save_checkpoint(r, o.checkpoint);
}

} // namespace

int dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Certified upper bounds on singlet extractability for a CHSH state family",
               "chshcert"};
  app.require_subcommand(1);
  Options o;

  auto add_state = [&](CLI::App *s, bool with_q) {
    s->add_option("--nu", o.nu, "weight of the Phi+ block")->check(CLI::Range(0.0, 1.0))->default_str(exact(o.nu));
    if (!with_q)
      return;
    s->add_option("--pc", o.pc, "corner mass p_c")->check(CLI::Range(0.0, 1.0))->default_str(exact(o.pc));
    s->add_option("--q", o.q, "corner split q")->check(CLI::Range(0.0, 1.0))->default_str(exact(o.q));
  };
  auto add_output = [&](CLI::App *s) {
    s->add_option("--out", o.out, "write the report to this file")->capture_default_str();
    s->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"human", "structured"}))
        ->capture_default_str();
    s->add_flag("--timestamps", o.timestamps, "include start and finish times")->default_str("false");
  };
  auto add_engine = [&](CLI::App *s) {
    s->add_option("--threshold", o.threshold, "bound to certify")->default_str(exact(o.threshold));
    s->add_option("--delta0", o.delta0, "initial grid edge")->check(CLI::PositiveNumber)->default_str(exact(o.delta0));
    s->add_option("--max-depth", o.max_depth, "subdivision depth cap")->check(CLI::NonNegativeNumber)->capture_default_str();
    s->add_option("--budget", o.budget, "box budget")->capture_default_str();
    s->add_option("--fp-margin", o.fp_margin, "floating-point margin")->check(CLI::NonNegativeNumber)->default_str(exact(o.fp_margin));
    s->add_option("--workers", o.workers, "worker threads")->check(CLI::Range(1, 1024))->capture_default_str();
    s->add_option("--iota", o.iota, "gradient-norm bound")
        ->check(CLI::IsMember({"nominal", "tight", "rigorous"}))
        ->capture_default_str();
    s->add_option("--checkpoint", o.checkpoint, "write the certificate/checkpoint here")->capture_default_str();
  };

  CLI::App *score = app.add_subcommand("score", "CHSH score of the state family");
  add_state(score, false);
  add_output(score);

  CLI::App *eval = app.add_subcommand("eval", "evaluate the eps bound and its gradient at a point");
  eval->add_option("--point", o.point, "a0t a1t b0t b1t theta")->expected(5)->required();
  add_state(eval, true);
  eval->add_option("--branch", o.branch)->check(CLI::IsMember({"plus", "minus", "both"}))->capture_default_str();
  eval->add_option("--iota", o.iota)->check(CLI::IsMember({"nominal", "tight", "rigorous"}))->capture_default_str();
  add_output(eval);

  CLI::App *oracle = app.add_subcommand("oracle", "sample random strategies against the bound");
  add_state(oracle, true);
  oracle->add_option("--samples", o.samples)->capture_default_str();
  oracle->add_option("--seed", o.seed)->capture_default_str();
  add_output(oracle);

  CLI::App *cert = app.add_subcommand("certify", "certify max(eps+, eps-) <= threshold");
  add_state(cert, true);
  add_engine(cert);
  cert->add_flag("--slice", o.slice, "restrict a1t, b1t to [pi/4, pi/2]")->default_str("false");
  cert->add_flag("--no-exclusion", o.no_exclusion, "do not exclude the corner cube")->default_str("false");
  add_output(cert);

  CLI::App *res = app.add_subcommand("resume", "continue a checkpointed certification");
  res->add_option("--checkpoint", o.checkpoint, "checkpoint file")->required()->check(CLI::ExistingFile);
  res->add_option("--budget", o.budget)->capture_default_str();
  res->add_option("--workers", o.workers)->check(CLI::Range(1, 1024))->capture_default_str();
  add_output(res);

  CLI::App *scn = app.add_subcommand("scan", "scan nu, minimising the maximised bound over p_c");
  scn->add_option("--lower", o.lower)->check(CLI::Range(0.0, 1.0))->default_str(exact(o.lower));
  scn->add_option("--upper", o.upper)->check(CLI::Range(0.0, 1.0))->default_str(exact(o.upper));
  scn->add_option("--step", o.step)->check(CLI::PositiveNumber)->default_str(exact(o.step));
  scn->add_option("--seed", o.seed)->capture_default_str();
  scn->add_flag("--full", o.full, "do not stop at the first failing nu")->default_str("false");
  add_output(scn);

  CLI::App *repro = app.add_subcommand("repro", "certify the reference example end to end");
  add_engine(repro);
  add_output(repro);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App *sub = app.get_subcommands().front();
  RunConfig run{sub->get_name(), flags_echo(sub), o.timestamps};
  const std::string started = utc_now();
  try {
    const OutputFormat fmt = output_format_from_string(o.format);
    Document result;
    int code = kExitOk;
    if (sub == score) {
      result = run_score(o);
    } else if (sub == eval) {
      result = run_eval(o);
    } else if (sub == oracle) {
      bool violated = false;
      result = run_oracle(o, violated);
      code = violated ? kExitRefuted : kExitOk;
    } else if (sub == cert) {
      const CertificateReport r = certify(epsilon_problem(run_options(o)));
      maybe_checkpoint(o, r);
      result = certificate_result(r);
      code = exit_code(r.status);
    } else if (sub == res) {
      const CertificateReport prev = load_checkpoint(o.checkpoint);
      CertConfig c = prev.config;
      c.budget = o.budget;
      c.workers = o.workers;
      const CertificateReport r = resume(problem_from_config(c), prev);
      save_checkpoint(r, o.checkpoint);
      result = certificate_result(r);
      code = exit_code(r.status);
    } else if (sub == scn) {
      ScanConfig sc;
      sc.nu_start = o.lower;
      sc.nu_end = o.upper;
      sc.nu_step = o.step;
      sc.full = o.full;
      sc.pc.maximizer.seed = o.seed;
      const ScanResult s = scan(sc);
      if (fmt == OutputFormat::human) {
        const std::string csv = scan_to_csv(s);
        if (o.out.empty()) {
          out << csv;
        } else {
          std::ofstream f(o.out);
          f << csv;
          if (!f)
            throw std::runtime_error("cannot write report: " + o.out);
        }
        return kExitOk;
      }
      result = scan_to_json(s);
    } else if (sub == repro) {
      EpsilonRunOptions ro = run_options(o);
      ro.params = reference_parameters<double>();
      const ReferenceReproduction r = reproduce_reference_example(ro);
      maybe_checkpoint(o, r.certificate);
      result = reproduction_to_json(r);
      code = r.verified ? kExitOk : exit_code(r.certificate.status);
      if (code == kExitOk && !r.verified)
        code = kExitRefuted;
    }
    Document doc = make_document(run, std::move(result));
    if (run.timestamps)
      stamp(doc, started, utc_now());
    emit_report(doc, fmt, o.out, out);
    return code;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

} // namespace chshcert
