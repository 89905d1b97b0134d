#include "mzi/scenario_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>
#include <vector>

namespace mzi {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view rstrip(std::string_view s) {
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// A token plus where it started, so diagnostics can point at it. Columns are
// 1-based and refer to the original line (comments are cut, never shifted).
struct Token {
  std::string_view text;
  int column;
};

std::vector<Token> tokenize(std::string_view s, std::size_t offset) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    if (i == s.size()) break;
    std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    out.push_back({s.substr(start, i - start), static_cast<int>(offset + start) + 1});
  }
  return out;
}

double parse_number(std::string_view line, std::size_t& pos, int line_no, const char* what_for) {
  while (pos < line.size() && is_space(line[pos])) ++pos;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), value);
  if (ec != std::errc{})
    throw ScenarioSyntaxError(std::string("expected ") + what_for, line_no,
                              static_cast<int>(pos) + 1);
  pos = static_cast<std::size_t>(ptr - line.data());
  return value;
}

void require_finite(double value, const std::string& what_for, int line_no) {
  if (!std::isfinite(value))
    throw ScenarioSemanticError(what_for + " must be finite", line_no);
}

void check_mirror_id(std::string_view id, int line_no, int column) {
  if (id.find('.') != std::string_view::npos)
    throw ScenarioSemanticError("mirror id \"" + std::string(id) + "\" may not contain '.'",
                                line_no, column);
}

enum class Section { none, beam, sampling, mirror, paths };

struct ParserState {
  Scenario scenario;
  Section section = Section::none;
  std::string current_mirror;
  std::set<std::string> section_keys;  // keys seen in the current section
  std::set<std::string> singleton_sections_seen;
  std::map<std::string, int> mirror_section_lines;
  std::set<std::string> mirrors_with_freq;
  std::vector<int> route_lines;  // one entry per parsed route
  int sampling_line = 0;
  int paths_line = 0;
};

void enter_section(ParserState& st, std::string_view line, std::size_t pos, int line_no) {
  std::size_t close = line.find(']', pos);
  if (close == std::string_view::npos)
    throw ScenarioSyntaxError("expected ']'", line_no, static_cast<int>(line.size()) + 1);
  std::size_t after = close + 1;
  while (after < line.size() && is_space(line[after])) ++after;
  if (after < line.size())
    throw ScenarioSyntaxError("unexpected text after ']'", line_no, static_cast<int>(after) + 1);

  std::vector<Token> tokens = tokenize(line.substr(pos + 1, close - pos - 1), pos + 1);
  if (tokens.empty())
    throw ScenarioSyntaxError("empty section header", line_no, static_cast<int>(pos) + 2);

  st.section_keys.clear();
  st.current_mirror.clear();
  const std::string name(tokens[0].text);
  if (name == "mirror") {
    if (tokens.size() != 2)
      throw ScenarioSyntaxError("expected '[mirror <id>]'", line_no,
                                tokens.size() > 2 ? tokens[2].column : tokens[0].column);
    check_mirror_id(tokens[1].text, line_no, tokens[1].column);
    st.current_mirror = std::string(tokens[1].text);
    if (!st.mirror_section_lines.emplace(st.current_mirror, line_no).second)
      throw ScenarioSemanticError("duplicate section [mirror " + st.current_mirror + "]", line_no);
    st.scenario.mirrors[st.current_mirror] = MirrorSettings{};
    st.section = Section::mirror;
    return;
  }

  if (tokens.size() != 1)
    throw ScenarioSyntaxError("unexpected token after section name", line_no, tokens[1].column);
  if (name == "beam")
    st.section = Section::beam;
  else if (name == "sampling")
    st.section = Section::sampling;
  else if (name == "paths")
    st.section = Section::paths;
  else
    throw ScenarioSemanticError("unknown section [" + name + "]", line_no, tokens[0].column);
  if (!st.singleton_sections_seen.insert(name).second)
    throw ScenarioSemanticError("duplicate section [" + name + "]", line_no);
  if (st.section == Section::sampling) st.sampling_line = line_no;
  if (st.section == Section::paths) st.paths_line = line_no;
}

void parse_route(ParserState& st, std::string_view line, std::size_t pos, int line_no) {
  OpticalPath path;
  double re = parse_number(line, pos, line_no, "route amplitude (re im : mirrors)");
  double im = parse_number(line, pos, line_no, "imaginary part of the route amplitude");
  path.amplitude = {re, im};
  require_finite(re, "route amplitude", line_no);
  require_finite(im, "route amplitude", line_no);

  while (pos < line.size() && is_space(line[pos])) ++pos;
  if (pos == line.size() || line[pos] != ':')
    throw ScenarioSyntaxError("expected ':'", line_no, static_cast<int>(pos) + 1);
  ++pos;

  std::vector<Token> ids = tokenize(line.substr(pos), pos);
  if (ids.empty())
    throw ScenarioSyntaxError("expected at least one mirror id after ':'", line_no,
                              static_cast<int>(pos) + 1);
  std::set<std::string_view> seen;
  for (const Token& id : ids) {
    check_mirror_id(id.text, line_no, id.column);
    if (!seen.insert(id.text).second)
      throw ScenarioSemanticError(
          "mirror \"" + std::string(id.text) + "\" appears twice on one route", line_no, id.column);
    path.mirrors.emplace_back(id.text);
  }
  path.element_sequence = path.mirrors;
  st.scenario.paths.push_back(std::move(path));
  st.route_lines.push_back(line_no);
}

void assign_key(ParserState& st, const std::string& key, double value, int line_no) {
  Scenario& sc = st.scenario;
  auto reject = [&](const std::string& why) { throw ScenarioSemanticError(why, line_no); };
  require_finite(value, key, line_no);

  switch (st.section) {
    case Section::beam:
      if (key == "waist_mm") {
        if (value <= 0) reject("waist_mm must be positive");
        sc.beam.waist_mm = value;
      } else if (key == "amplitude") {
        if (value <= 0) reject("amplitude must be positive");
        sc.beam.amplitude = value;
      } else if (key == "attenuation") {
        if (value <= 0 || value > 1) reject("attenuation must be in (0, 1]");
        sc.attenuation = value;
      } else {
        reject("unknown key \"" + key + "\" in [beam]");
      }
      return;
    case Section::sampling:
      if (key == "rate_hz") {
        if (value <= 0) reject("rate_hz must be positive");
        sc.sampling.rate_hz = value;
      } else if (key == "duration_s") {
        if (value <= 0) reject("duration_s must be positive");
        sc.sampling.duration_s = value;
      } else {
        reject("unknown key \"" + key + "\" in [sampling]");
      }
      return;
    case Section::mirror: {
      MirrorSettings& m = sc.mirrors.at(st.current_mirror);
      if (key == "freq_hz") {
        if (value <= 0) reject("freq_hz must be positive");
        m.vibration.frequency_hz = value;
        st.mirrors_with_freq.insert(st.current_mirror);
      } else if (key == "displacement_um") {
        if (value < 0) reject("displacement_um must be non-negative");
        m.vibration.displacement_um = value;
      } else if (key == "vib_phase_rad") {
        m.vibration.phase_rad = value;
      } else if (key == "static_phase_rad") {
        m.static_phase_rad = value;
      } else {
        reject("unknown key \"" + key + "\" in [mirror " + st.current_mirror + "]");
      }
      return;
    }
    default:
      reject("key \"" + key + "\" outside any section");
  }
}

void parse_key_value(ParserState& st, std::string_view line, std::size_t pos, int line_no) {
  // The key is everything up to '=' (which may be glued to either side).
  std::size_t eq = line.find('=', pos);
  if (eq == std::string_view::npos) {
    std::vector<Token> head = tokenize(line.substr(pos), pos);
    throw ScenarioSyntaxError("expected '=' after \"" + std::string(head[0].text) + "\"", line_no,
                              static_cast<int>(line.size()) + 1);
  }
  std::string key(rstrip(line.substr(pos, eq - pos)));
  if (key.empty())
    throw ScenarioSyntaxError("expected a key before '='", line_no, static_cast<int>(pos) + 1);
  if (std::size_t ws = key.find_first_of(" \t"); ws != std::string::npos)
    throw ScenarioSyntaxError("expected '='", line_no, static_cast<int>(pos + ws) + 1);

  pos = eq + 1;
  double value = parse_number(line, pos, line_no, "a numeric value");
  while (pos < line.size() && is_space(line[pos])) ++pos;
  if (pos < line.size())
    throw ScenarioSyntaxError("unexpected text after value", line_no, static_cast<int>(pos) + 1);

  if (st.section == Section::none)
    throw ScenarioSyntaxError("expected a section header before \"" + key + "\"", line_no, 1);
  if (!st.section_keys.insert(key).second)
    throw ScenarioSemanticError("duplicate key \"" + key + "\"", line_no);
  assign_key(st, key, value, line_no);
}

void finalize(ParserState& st) {
  const Scenario& sc = st.scenario;

  if (st.paths_line == 0) throw ScenarioSemanticError("scenario has no [paths] section", 0);
  if (sc.paths.empty())
    throw ScenarioSemanticError("the [paths] section lists no routes", st.paths_line);

  for (std::size_t i = 0; i < sc.paths.size(); ++i)
    for (const std::string& m : sc.paths[i].mirrors)
      if (!sc.mirrors.count(m))
        throw ScenarioSemanticError(
            "route references mirror \"" + m + "\" which has no [mirror " + m + "] section",
            st.route_lines[i]);

  for (const auto& [id, line] : st.mirror_section_lines)
    if (!st.mirrors_with_freq.count(id))
      throw ScenarioSemanticError("[mirror " + id + "] is missing freq_hz", line);

  double power = 0.0;
  for (const OpticalPath& p : sc.paths) power += std::norm(p.amplitude);
  if (power > 1.0 + 1e-9)
    throw ScenarioSemanticError(
        "total route power " + format_double(power) + " exceeds the input power", 0);

  const double samples = sc.sampling.rate_hz * sc.sampling.duration_s;
  if (std::abs(samples - std::round(samples)) > 1e-6 || std::round(samples) < 1.0)
    throw ScenarioSemanticError(
        "rate_hz * duration_s = " + format_double(samples) + " is not a whole number of samples",
        st.sampling_line);
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  ParserState st;
  int line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string::npos) {
      if (begin == text.size()) break;
      end = text.size();
    }
    ++line_no;
    std::string_view line(text.data() + begin, end - begin);
    begin = end + 1;

    if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = rstrip(line);
    std::size_t pos = 0;
    while (pos < line.size() && is_space(line[pos])) ++pos;
    if (pos == line.size()) continue;

    if (line[pos] == '[')
      enter_section(st, line, pos, line_no);
    else if (st.section == Section::paths)
      parse_route(st, line, pos, line_no);
    else
      parse_key_value(st, line, pos, line_no);
  }
  finalize(st);
  return st.scenario;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  Scenario scenario = parse_scenario(buffer.str());
  scenario.name = std::filesystem::path(path).stem().string();
  return scenario;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

void append_key(std::string& out, const char* key, double value) {
  out += key;
  out += " = ";
  out += format_double(value);
  out += '\n';
}

}  // namespace

std::string serialize_scenario(const Scenario& scenario) {
  std::string out = "# interferometer scenario\n\n[beam]\n";
  append_key(out, "waist_mm", scenario.beam.waist_mm);
  append_key(out, "amplitude", scenario.beam.amplitude);
  append_key(out, "attenuation", scenario.attenuation);
  out += "\n[sampling]\n";
  append_key(out, "rate_hz", scenario.sampling.rate_hz);
  append_key(out, "duration_s", scenario.sampling.duration_s);
  for (const auto& [id, settings] : scenario.mirrors) {
    out += "\n[mirror " + id + "]\n";
    append_key(out, "freq_hz", settings.vibration.frequency_hz);
    append_key(out, "displacement_um", settings.vibration.displacement_um);
    append_key(out, "vib_phase_rad", settings.vibration.phase_rad);
    append_key(out, "static_phase_rad", settings.static_phase_rad);
  }
  out += "\n[paths]\n";
  for (const OpticalPath& p : scenario.paths) {
    out += format_double(p.amplitude.real());
    out += ' ';
    out += format_double(p.amplitude.imag());
    out += " :";
    for (const std::string& m : p.mirrors) {
      out += ' ';
      out += m;
    }
    out += '\n';
  }
  return out;
}

std::string to_csv(const DetectorTimeSeries& series) {
  std::string out = "t_s,signal\n";
  for (Eigen::Index n = 0; n < series.samples.size(); ++n) {
    out += format_double(series.sampling.time_s(n));
    out += ',';
    out += format_double(series.samples[n]);
    out += '\n';
  }
  return out;
}

std::string to_csv(const PowerSpectrum& spectrum) {
  std::string out = "freq_hz,power\n";
  for (Eigen::Index i = 0; i < spectrum.powers.size(); ++i) {
    out += format_double(spectrum.frequency_hz(i));
    out += ',';
    out += format_double(spectrum.powers[i]);
    out += '\n';
  }
  return out;
}

std::string to_report_text(const WeakValueReport& report, const std::string& note) {
  std::string out;
  if (!note.empty()) out = "# " + note + "\n";
  for (const auto& [mirror, value] : report.values) {
    out += mirror;
    out += ' ';
    out += format_double(value.real());
    out += ' ';
    out += format_double(value.imag());
    out += '\n';
  }
  out += "overlap " + format_double(report.overlap.real()) + ' ' +
         format_double(report.overlap.imag()) + '\n';
  out += report.defined ? "defined true\n" : "defined false\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace mzi
