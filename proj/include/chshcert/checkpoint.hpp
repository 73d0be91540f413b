#pragma once

// Structured (JSON) serialization of certifier configurations and reports.
// Doubles round-trip exactly; a budget-exceeded report doubles as a
// checkpoint for resume().

#include <string>

#include <json.hpp>

#include "chshcert/certifier.hpp"

namespace chshcert {

inline constexpr const char *kCheckpointSchema = "chshcert.certificate";
inline constexpr int kCheckpointVersion = 1;

nlohmann::ordered_json point_to_json(const Point &x);
Point point_from_json(const nlohmann::ordered_json &j);

nlohmann::ordered_json config_to_json(const CertConfig &c);
CertConfig config_from_json(const nlohmann::ordered_json &j);

nlohmann::ordered_json report_to_json(const CertificateReport &r);
CertificateReport report_from_json(const nlohmann::ordered_json &j);

void save_checkpoint(const CertificateReport &r, const std::string &path);
CertificateReport load_checkpoint(const std::string &path);

} // namespace chshcert
