#pragma once

#include <stdexcept>
#include <string>

#include "mzi/scenario.hpp"

namespace mzi {

// Scenario text format, line oriented. '#' starts a comment anywhere.
//
//   [beam]            keys: waist_mm, amplitude, attenuation
//   [sampling]        keys: rate_hz, duration_s
//   [mirror <ID>]     keys: freq_hz (required), displacement_um,
//                     vib_phase_rad, static_phase_rad
//   [paths]           one route per line:  RE IM : M1 M2 ...
//
// Every mirror named in [paths] needs its own [mirror] section. Unknown keys,
// duplicate sections/keys and out-of-range values are rejected. Amplitudes in
// [paths] are pre-attenuation; loading multiplies them by sqrt(attenuation).

/// @brief Base of all scenario-file complaints; carries a 1-based line (and,
/// for syntax errors, column). 0 means "not applicable".
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& what, int line, int column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// @brief Malformed text: bad section header, missing '=', unparseable number.
class ScenarioSyntaxError : public ScenarioError {
 public:
  using ScenarioError::ScenarioError;
};

/// @brief Well-formed text with impossible content: unknown key or mirror,
/// duplicate section, value outside its allowed range.
class ScenarioSemanticError : public ScenarioError {
 public:
  using ScenarioError::ScenarioError;
};

Scenario parse_scenario(const std::string& text);
/// @brief parse_scenario over a file's contents; the scenario takes the file
/// stem as its name. Throws std::runtime_error when the file cannot be read.
Scenario load_scenario_file(const std::string& path);

/// @brief Canonical text form: fixed section and key order, mirrors sorted by
/// id, routes in stored order, numbers with 17 significant digits. Applying
/// serialize(parse(.)) once is a fixed point byte for byte.
std::string serialize_scenario(const Scenario& scenario);

// Deterministic writers shared by run_scenario and the command-line tool.
std::string to_csv(const DetectorTimeSeries& series);      // t_s,signal
std::string to_csv(const PowerSpectrum& spectrum);         // freq_hz,power
/// @brief One "MIRROR re im" line per mirror, then "overlap re im" and
/// "defined true|false". A non-empty note becomes a leading comment.
std::string to_report_text(const WeakValueReport& report, const std::string& note = "");

/// @brief Format with 17 significant digits (round-trips any finite double).
std::string format_double(double value);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace mzi
