#include "chshcert/report.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <vector>

#include "chshcert/checkpoint.hpp"
#include "chshcert/types.hpp"

namespace chshcert {

OutputFormat output_format_from_string(const std::string &s) {
  if (s == "human")
    return OutputFormat::human;
  if (s == "structured")
    return OutputFormat::structured;
  throw InvalidParameter("unknown output format: " + s);
}

namespace {

std::string fnv1a_hex(const std::string &text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string scalar_text(const Document &v) {
  if (v.is_null())
    return "-";
  if (v.is_string())
    return v.get<std::string>();
  if (v.is_boolean())
    return v.get<bool>() ? "true" : "false";
  if (v.is_number_float())
    return format_number(v.get<double>());
  return v.dump();
}

bool is_flat_array(const Document &v) {
  if (!v.is_array())
    return false;
  for (const auto &e : v)
    if (e.is_structured())
      return false;
  return true;
}

// Flattens nested objects to dotted keys; arrays of objects become a count.
void flatten(const Document &v, const std::string &prefix,
             std::vector<std::pair<std::string, std::string>> &rows) {
  if (v.is_object()) {
    for (const auto &[k, e] : v.items())
      flatten(e, prefix.empty() ? k : prefix + "." + k, rows);
  } else if (is_flat_array(v)) {
    std::string line = "[";
    for (std::size_t i = 0; i < v.size(); ++i)
      line += (i ? ", " : "") + scalar_text(v[i]);
    rows.emplace_back(prefix, line + "]");
  } else if (v.is_array()) {
    rows.emplace_back(prefix, std::to_string(v.size()) + " entries");
  } else {
    rows.emplace_back(prefix, scalar_text(v));
  }
}

} // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Document make_document(const RunConfig &run, Document result) {
  Document doc;
  doc["schema"] = kReportSchema;
  doc["version"] = kReportVersion;
  doc["command"] = run.command;
  doc["config"] = run.flags;
  doc["config_hash"] = fnv1a_hex(run.command + run.flags.dump());
  doc["result"] = std::move(result);
  return doc;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void stamp(Document &doc, const std::string &started_at, const std::string &finished_at) {
  doc["started_at"] = started_at;
  doc["finished_at"] = finished_at;
}

std::string render(const Document &doc, OutputFormat format) {
  if (format == OutputFormat::structured)
    return doc.dump(2) + "\n";
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(doc, "", rows);
  std::size_t width = 0;
  for (const auto &r : rows)
    width = std::max(width, r.first.size());
  std::ostringstream os;
  for (const auto &[k, v] : rows)
    os << k << std::string(width - k.size() + 2, ' ') << v << '\n';
  return os.str();
}

void emit_report(const Document &doc, OutputFormat format, const std::string &path,
                 std::ostream &fallback) {
  const std::string text = render(doc, format);
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write report: " + path);
  out << text;
  if (!out)
    throw std::runtime_error("failed writing report: " + path);
}

Document reproduction_to_json(const ReferenceReproduction &r) {
  Document res;
  res["verdict"] = r.verified ? "verified" : "not verified";
  if (r.verified)
    res["statement"] = "extractability <= 1/2";
  res["chsh"] = r.chsh;
  res["comparison_fidelity_bound"] = comparison_fidelity_bound(r.chsh);
  res["iota_sup"] = r.iota;
  res["residual"] = {{"lambda_max", r.residual.lambda_max}, {"valid", r.residual.valid}};
  res["certificate"] = report_to_json(r.certificate);
  return res;
}

Document scan_to_json(const ScanResult &s) {
  auto row_json = [](const ScanRow &r) {
    return Document{{"nu", r.nu},
                    {"best_pc", r.best_pc},
                    {"eps_max", r.eps_max},
                    {"chsh", r.chsh},
                    {"certified", r.certified}};
  };
  Document rows = Document::array();
  for (const auto &r : s.rows)
    rows.push_back(row_json(r));
  Document res;
  res["rows"] = rows;
  res["candidate"] = s.candidate ? row_json(*s.candidate) : Document();
  return res;
}

std::string scan_to_csv(const ScanResult &s) {
  std::ostringstream os;
  os << "nu,best_pc,eps_max,chsh,certified\n";
  char buf[160];
  for (const auto &r : s.rows) {
    std::snprintf(buf, sizeof buf, "%.6f,%.8f,%.12f,%.12f,%s\n", r.nu, r.best_pc, r.eps_max,
                  r.chsh, r.certified ? "true" : "false");
    os << buf;
  }
  return os.str();
}

} // namespace chshcert
