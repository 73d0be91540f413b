#pragma once

// Report documents shared by every CLI command: a versioned JSON envelope
// with the run configuration, rendered either as JSON or as aligned text.

#include <ostream>
#include <string>

#include <json.hpp>

#include "chshcert/reference_problem.hpp"
#include "chshcert/threshold_search.hpp"

namespace chshcert {

using Document = nlohmann::ordered_json;

inline constexpr const char *kReportSchema = "chshcert.report";
inline constexpr int kReportVersion = 1;

enum class OutputFormat { human, structured };

OutputFormat output_format_from_string(const std::string &s);

struct RunConfig {
  std::string command;
  Document flags = Document::object();
  bool timestamps = false;
};

/// Envelope {schema, version, command, config, config_hash, result}.
Document make_document(const RunConfig &run, Document result);

/// Adds started_at / finished_at fields (UTC, ISO 8601).
void stamp(Document &doc, const std::string &started_at, const std::string &finished_at);
std::string utc_now();

std::string render(const Document &doc, OutputFormat format);

/// Writes to `path`, or to `fallback` when the path is empty.
void emit_report(const Document &doc, OutputFormat format, const std::string &path,
                 std::ostream &fallback);

Document reproduction_to_json(const ReferenceReproduction &r);
Document scan_to_json(const ScanResult &s);
std::string scan_to_csv(const ScanResult &s);

std::string format_number(double v);

} // namespace chshcert
