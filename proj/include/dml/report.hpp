#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dml/field.hpp"
#include "dml/return_set.hpp"

namespace dml {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

enum class Command { Orbit, Sml, Interp, Degree, Height, Density };
std::string to_string(Command c);
Command command_from_string(const std::string& s);

/// A validated problem file. Command-specific options stay as JSON sections.
struct ProblemFile {
  int version = 1;
  Command command = Command::Orbit;
  Field field = Field::rational();
  std::vector<std::string> map;
  std::vector<std::string> point;
  std::vector<std::string> targets;
  std::vector<std::string> recurrence_coeffs;
  std::vector<std::string> recurrence_initial;
  ClassifyConfig config;
  std::uint64_t term_budget = 200000;
  Json section = Json::object();
  /// The input as read, after overrides.
  Json source;
};

/// Validates a parsed document; throws SchemaError.
ProblemFile parse_problem(const Json& doc);
/// Parses text, applies key=value overrides, validates. JSON syntax errors
/// become ParseError carrying the byte offset.
ProblemFile parse_problem_text(std::string_view text, const std::vector<std::string>& overrides = {});
/// `key=value` with a dotted key path; bare keys address "config".
void apply_override(Json& doc, const std::string& assignment);

struct Report {
  std::string command;
  Json input;
  Json result;
  /// CERTIFIED, CERTIFIED-NUMERIC, PARTIAL, COMPLETE or ERROR.
  std::string status;
  Json certificate;
  std::uint64_t timing_ms = 0;
  std::string version = kToolVersion;

  /// 0 for CERTIFIED/COMPLETE, 2 for PARTIAL/CERTIFIED-NUMERIC, 3 for ERROR.
  int exit_code() const;
  Json to_json() const;
  static Report from_json(const Json& j);
  /// Equality ignoring timing.
  bool same_payload(const Report& other) const;
  friend bool operator==(const Report&, const Report&) = default;
};

Report run(const ProblemFile& problem);
/// An ERROR report for a failure outside run (bad file, bad override).
Report error_report(const std::string& command, const std::string& kind, const std::string& message,
                    std::optional<std::size_t> offset = std::nullopt);

enum class Format { Json, Text };
Format format_from_string(const std::string& s);
std::string emit(const Report& report, Format format);

Json return_set_json(const ReturnSet& rs);
Json certificate_json(const Certificate& c);

}  // namespace dml
