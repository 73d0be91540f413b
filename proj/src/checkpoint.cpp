#include "chshcert/checkpoint.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "chshcert/types.hpp"

namespace chshcert {

using nlohmann::ordered_json;

namespace {

// JSON has no infinities; an empty maximum is written as null.
ordered_json finite_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(); }

double from_nullable(const ordered_json &j) {
  return j.is_null() ? -std::numeric_limits<double>::infinity() : j.get<double>();
}

ordered_json box_to_json(const AxisBox &b) {
  return {{"lower", point_to_json(b.lower)}, {"upper", point_to_json(b.upper)}};
}

AxisBox box_from_json(const ordered_json &j) {
  return {point_from_json(j.at("lower")), point_from_json(j.at("upper"))};
}

ordered_json hyperbox_to_json(const HyperBox &b) {
  return {{"center", point_to_json(b.center)}, {"half_edge", b.half_edge}, {"depth", b.depth}};
}

HyperBox hyperbox_from_json(const ordered_json &j) {
  return {point_from_json(j.at("center")), j.at("half_edge").get<double>(),
          j.at("depth").get<int>()};
}

} // namespace

ordered_json point_to_json(const Point &x) {
  ordered_json a = ordered_json::array();
  for (int i = 0; i < x.size(); ++i)
    a.push_back(x(i));
  return a;
}

Point point_from_json(const ordered_json &j) {
  detail::require(j.is_array() && j.size() <= std::size_t(kMaxDimension),
                  "point must be an array of at most 8 numbers");
  Point x(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    x(static_cast<int>(i)) = j[i].get<double>();
  return x;
}

ordered_json config_to_json(const CertConfig &c) {
  ordered_json params = ordered_json::object();
  for (const auto &[k, v] : c.objective_params)
    params[k] = v;
  ordered_json ex = ordered_json::array();
  for (const auto &b : c.exclusions)
    ex.push_back(box_to_json(b));
  return {{"objective", c.objective_id},
          {"objective_params", params},
          {"domain", box_to_json(c.domain)},
          {"lipschitz", c.lipschitz},
          {"threshold", c.threshold},
          {"exclusions", ex},
          {"fp_margin", c.fp_margin},
          {"initial_delta", c.initial_delta},
          {"max_depth", c.max_depth},
          {"budget", c.budget},
          {"workers", c.workers}};
}

CertConfig config_from_json(const ordered_json &j) {
  CertConfig c;
  c.objective_id = j.at("objective").get<std::string>();
  for (const auto &[k, v] : j.at("objective_params").items())
    c.objective_params.emplace_back(k, v.get<double>());
  c.domain = box_from_json(j.at("domain"));
  c.lipschitz = j.at("lipschitz").get<double>();
  c.threshold = j.at("threshold").get<double>();
  for (const auto &b : j.at("exclusions"))
    c.exclusions.push_back(box_from_json(b));
  c.fp_margin = j.at("fp_margin").get<double>();
  c.initial_delta = j.at("initial_delta").get<double>();
  c.max_depth = j.at("max_depth").get<int>();
  c.budget = j.at("budget").get<std::uint64_t>();
  c.workers = j.at("workers").get<int>();
  return c;
}

std::string config_hash(const CertConfig &c) {
  ordered_json j = config_to_json(c);
  j.erase("budget");
  j.erase("workers");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

ordered_json report_to_json(const CertificateReport &r) {
  const auto &c = r.counters;
  ordered_json frontier = ordered_json::array();
  for (const auto &b : r.frontier)
    frontier.push_back(hyperbox_to_json(b));
  ordered_json j = {
      {"schema", kCheckpointSchema},
      {"version", kCheckpointVersion},
      {"status", to_string(r.status)},
      {"config", config_to_json(r.config)},
      {"config_hash", r.config_hash},
      {"counters",
       {{"boxes_processed", c.boxes_processed},
        {"evaluations", c.evaluations},
        {"boxes_eliminated", c.boxes_eliminated},
        {"boxes_excluded", c.boxes_excluded},
        {"max_depth_reached", c.max_depth_reached},
        {"max_center_value", finite_or_null(c.max_center_value)},
        {"eliminated_volume", c.eliminated_volume},
        {"excluded_volume", c.excluded_volume}}},
      {"witness", r.witness ? point_to_json(*r.witness) : ordered_json()},
      {"witness_value", r.witness_value ? ordered_json(*r.witness_value) : ordered_json()},
      {"frontier", frontier}};
  return j;
}

CertificateReport report_from_json(const ordered_json &j) {
  if (j.value("schema", std::string()) != kCheckpointSchema)
    throw InvalidParameter("not a certificate document");
  if (j.at("version").get<int>() != kCheckpointVersion)
    throw InvalidParameter("unsupported certificate version");
  CertificateReport r;
  r.status = cert_status_from_string(j.at("status").get<std::string>());
  r.config = config_from_json(j.at("config"));
  r.config_hash = j.at("config_hash").get<std::string>();
  const auto &c = j.at("counters");
  r.counters.boxes_processed = c.at("boxes_processed").get<std::uint64_t>();
  r.counters.evaluations = c.at("evaluations").get<std::uint64_t>();
  r.counters.boxes_eliminated = c.at("boxes_eliminated").get<std::uint64_t>();
  r.counters.boxes_excluded = c.at("boxes_excluded").get<std::uint64_t>();
  r.counters.max_depth_reached = c.at("max_depth_reached").get<int>();
  r.counters.max_center_value = from_nullable(c.at("max_center_value"));
  r.counters.eliminated_volume = c.at("eliminated_volume").get<double>();
  r.counters.excluded_volume = c.at("excluded_volume").get<double>();
  if (!j.at("witness").is_null())
    r.witness = point_from_json(j.at("witness"));
  if (!j.at("witness_value").is_null())
    r.witness_value = j.at("witness_value").get<double>();
  for (const auto &b : j.at("frontier"))
    r.frontier.push_back(hyperbox_from_json(b));
  return r;
}

void save_checkpoint(const CertificateReport &r, const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write checkpoint: " + path);
  out << report_to_json(r).dump(2) << '\n';
  if (!out)
    throw std::runtime_error("failed writing checkpoint: " + path);
}

CertificateReport load_checkpoint(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot read checkpoint: " + path);
  return report_from_json(ordered_json::parse(in));
}

} // namespace chshcert
