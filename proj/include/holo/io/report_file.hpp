#pragma once

// Synthesis report files. JSON with every floating-point value stored twice:
// a decimal rendering for people and a C99 hexadecimal ("%a") rendering that
// is authoritative on read, so write -> read -> write is byte-identical.
//
//   scalar:  {"value": 3.141592653589793, "hex": "0x1.921fb54442d18p+1"}
//   matrix:  {"rows": r, "cols": c, "entries": [[[re, im], ...], ...],
//             "hex": [[["0x..", "0x.."], ...], ...]}

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "holo/io/gate_spec.hpp"
#include "holo/synthesis.hpp"
#include "holo/version.hpp"

namespace holo::io {

inline constexpr std::string_view kReportFormat = "holo-report";
inline constexpr int kReportFormatVersion = 1;

struct ReportFile {
  std::string tool_version{kVersion};
  std::string input_sha256;
  std::string created;

  std::string gate_label;
  CMatrix gate;
  CMatrix rotation;
  std::vector<double> gammas;
  std::vector<double> phases;

  // Controller blocks exactly as stored. X is kept separately so an edited
  // file whose X no longer matches [[Ω, W], [-W†, 0]] can be detected.
  CMatrix omega;
  CMatrix w;
  CMatrix x;

  CMatrix holonomy;
  double closure_error = 0.0;
  double holonomy_error = 0.0;
  double length = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string diagnostic;
};

inline ReportFile make_report(const UnitaryGate& gate, const SynthesisReport& synthesis,
                              std::string input_sha256, std::string created) {
  ReportFile r;
  r.input_sha256 = std::move(input_sha256);
  r.created = std::move(created);
  r.gate_label = gate.label();
  r.gate = gate.matrix();
  r.rotation = synthesis.spectrum.rotation;
  r.gammas = synthesis.spectrum.gammas;
  r.phases = synthesis.phases;
  r.omega = synthesis.controller.omega().matrix();
  r.w = synthesis.controller.w();
  r.x = synthesis.controller.generator().matrix();
  r.holonomy = synthesis.holonomy;
  r.closure_error = synthesis.closure_error;
  r.holonomy_error = synthesis.holonomy_error;
  r.length = synthesis.length;
  r.tolerance = synthesis.tolerance;
  r.passed = synthesis.passed;
  r.diagnostic = synthesis.diagnostic;
  return r;
}

namespace detail {

using ojson = nlohmann::ordered_json;

inline std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

inline ojson scalar_json(double v) { return ojson{{"value", v}, {"hex", hex(v)}}; }

inline ojson scalars_json(const std::vector<double>& values) {
  ojson out = ojson::array();
  for (double v : values) out.push_back(scalar_json(v));
  return out;
}

inline ojson matrix_json(const CMatrix& m) {
  ojson entries = ojson::array(), hexes = ojson::array();
  for (Index r = 0; r < m.rows(); ++r) {
    ojson row = ojson::array(), hex_row = ojson::array();
    for (Index c = 0; c < m.cols(); ++c) {
      row.push_back(ojson::array({m(r, c).real(), m(r, c).imag()}));
      hex_row.push_back(ojson::array({hex(m(r, c).real()), hex(m(r, c).imag())}));
    }
    entries.push_back(std::move(row));
    hexes.push_back(std::move(hex_row));
  }
  return ojson{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}, {"hex", std::move(hexes)}};
}

inline const ojson& member(const ojson& obj, const std::string& key, const std::string& pointer) {
  if (!obj.is_object()) fail_at(pointer, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail_at(pointer + "/" + key, "missing field");
  return *it;
}

inline double hex_value(const ojson& j, const std::string& pointer) {
  if (!j.is_string()) fail_at(pointer, "expected a hexadecimal float string");
  const std::string s = j.get<std::string>();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) fail_at(pointer, "malformed hexadecimal float '" + s + "'");
  return v;
}

// Reads the hex rendering and checks that the decimal one agrees with it.
inline double read_pair(const ojson& decimal, const ojson& hexed, const std::string& pointer) {
  const double v = hex_value(hexed, pointer + " (hex)");
  if (!decimal.is_number()) fail_at(pointer, "expected a number");
  const double d = decimal.get<double>();
  if (std::memcmp(&d, &v, sizeof d) != 0 && !(std::isnan(d) && std::isnan(v))) {
    fail_at(pointer, "decimal and hexadecimal renderings disagree");
  }
  return v;
}

inline double read_scalar(const ojson& j, const std::string& pointer) {
  return read_pair(member(j, "value", pointer), member(j, "hex", pointer), pointer);
}

inline std::vector<double> read_scalars(const ojson& j, const std::string& pointer) {
  if (!j.is_array()) fail_at(pointer, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_scalar(j[i], pointer + "/" + std::to_string(i)));
  return out;
}

inline Index read_index(const ojson& j, const std::string& pointer) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) fail_at(pointer, "expected a non-negative integer");
  return j.get<Index>();
}

inline CMatrix read_matrix(const ojson& j, const std::string& pointer) {
  const Index rows = read_index(member(j, "rows", pointer), pointer + "/rows");
  const Index cols = read_index(member(j, "cols", pointer), pointer + "/cols");
  const ojson& entries = member(j, "entries", pointer);
  const ojson& hexes = member(j, "hex", pointer);
  auto check_rows = [&](const ojson& a, const std::string& p) {
    if (!a.is_array() || static_cast<Index>(a.size()) != rows) {
      fail_at(p, "expected " + std::to_string(rows) + " rows");
    }
  };
  check_rows(entries, pointer + "/entries");
  check_rows(hexes, pointer + "/hex");
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto ur = static_cast<std::size_t>(r);
    const std::string rp = pointer + "/entries/" + std::to_string(r);
    if (!entries[ur].is_array() || static_cast<Index>(entries[ur].size()) != cols ||
        !hexes[ur].is_array() || static_cast<Index>(hexes[ur].size()) != cols) {
      fail_at(rp, "expected " + std::to_string(cols) + " columns");
    }
    for (Index c = 0; c < cols; ++c) {
      const auto uc = static_cast<std::size_t>(c);
      const ojson& e = entries[ur][uc];
      const ojson& h = hexes[ur][uc];
      const std::string ep = rp + "/" + std::to_string(c);
      if (!e.is_array() || e.size() != 2 || !h.is_array() || h.size() != 2) {
        fail_at(ep, "expected an [re, im] pair");
      }
      m(r, c) = Complex(read_pair(e[0], h[0], ep + "/0"), read_pair(e[1], h[1], ep + "/1"));
    }
  }
  return m;
}

inline std::string read_string(const ojson& j, const std::string& pointer) {
  if (!j.is_string()) fail_at(pointer, "expected a string");
  return j.get<std::string>();
}

}  // namespace detail

inline std::string write_report(const ReportFile& r) {
  using detail::ojson;
  const Index k = r.gate.rows();
  ojson doc;
  doc["format"] = kReportFormat;
  doc["format_version"] = kReportFormatVersion;
  doc["tool_version"] = r.tool_version;
  doc["input_sha256"] = r.input_sha256;
  doc["created"] = r.created;
  doc["gate"] = ojson{{"label", r.gate_label}, {"k", k}, {"matrix", detail::matrix_json(r.gate)}};
  doc["spectrum"] = ojson{{"gammas", detail::scalars_json(r.gammas)}, {"rotation", detail::matrix_json(r.rotation)}};
  doc["phases"] = detail::scalars_json(r.phases);
  doc["controller"] = ojson{{"k", r.omega.rows()},
                            {"N", r.x.rows()},
                            {"omega", detail::matrix_json(r.omega)},
                            {"w", detail::matrix_json(r.w)},
                            {"x", detail::matrix_json(r.x)}};
  doc["holonomy"] = detail::matrix_json(r.holonomy);
  doc["verification"] = ojson{{"closure_error", detail::scalar_json(r.closure_error)},
                              {"holonomy_error", detail::scalar_json(r.holonomy_error)},
                              {"length", detail::scalar_json(r.length)},
                              {"tolerance", detail::scalar_json(r.tolerance)},
                              {"passed", r.passed},
                              {"diagnostic", r.diagnostic}};
  return doc.dump(2) + "\n";
}

inline ReportFile read_report(std::string_view text) {
  using detail::member;
  const detail::ojson doc = [&] {
    try {
      return detail::ojson::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("syntax error at " + detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                       e.what());
    }
  }();
  if (!doc.is_object()) detail::fail_at("", "expected a JSON object");
  if (detail::read_string(member(doc, "format", ""), "/format") != kReportFormat) {
    detail::fail_at("/format", "not a holo report");
  }
  if (!member(doc, "format_version", "").is_number_integer() ||
      member(doc, "format_version", "").get<int>() != kReportFormatVersion) {
    detail::fail_at("/format_version", "unsupported report format version");
  }

  ReportFile r;
  r.tool_version = detail::read_string(member(doc, "tool_version", ""), "/tool_version");
  r.input_sha256 = detail::read_string(member(doc, "input_sha256", ""), "/input_sha256");
  r.created = detail::read_string(member(doc, "created", ""), "/created");

  const auto& gate = member(doc, "gate", "");
  r.gate_label = detail::read_string(member(gate, "label", "/gate"), "/gate/label");
  r.gate = detail::read_matrix(member(gate, "matrix", "/gate"), "/gate/matrix");
  const Index k = r.gate.rows();
  if (r.gate.cols() != k || k < 1) detail::fail_at("/gate/matrix", "gate must be square and non-empty");
  if (detail::read_index(member(gate, "k", "/gate"), "/gate/k") != k) {
    detail::fail_at("/gate/k", "does not match the matrix");
  }

  const auto& spectrum = member(doc, "spectrum", "");
  r.gammas = detail::read_scalars(member(spectrum, "gammas", "/spectrum"), "/spectrum/gammas");
  r.rotation = detail::read_matrix(member(spectrum, "rotation", "/spectrum"), "/spectrum/rotation");
  if (static_cast<Index>(r.gammas.size()) != k) detail::fail_at("/spectrum/gammas", "expected k entries");
  if (r.rotation.rows() != k || r.rotation.cols() != k) detail::fail_at("/spectrum/rotation", "expected a k×k matrix");
  r.phases = detail::read_scalars(member(doc, "phases", ""), "/phases");
  if (static_cast<Index>(r.phases.size()) != k) detail::fail_at("/phases", "expected k entries");

  const auto& controller = member(doc, "controller", "");
  r.omega = detail::read_matrix(member(controller, "omega", "/controller"), "/controller/omega");
  r.w = detail::read_matrix(member(controller, "w", "/controller"), "/controller/w");
  r.x = detail::read_matrix(member(controller, "x", "/controller"), "/controller/x");
  if (detail::read_index(member(controller, "k", "/controller"), "/controller/k") != k) {
    detail::fail_at("/controller/k", "does not match the gate");
  }
  if (detail::read_index(member(controller, "N", "/controller"), "/controller/N") != 2 * k) {
    detail::fail_at("/controller/N", "expected N = 2k");
  }
  if (r.omega.rows() != k || r.omega.cols() != k) detail::fail_at("/controller/omega", "expected a k×k matrix");
  if (r.w.rows() != k || r.w.cols() != k) detail::fail_at("/controller/w", "expected a k×k matrix");
  if (r.x.rows() != 2 * k || r.x.cols() != 2 * k) detail::fail_at("/controller/x", "expected a 2k×2k matrix");

  r.holonomy = detail::read_matrix(member(doc, "holonomy", ""), "/holonomy");

  const auto& v = member(doc, "verification", "");
  r.closure_error = detail::read_scalar(member(v, "closure_error", "/verification"), "/verification/closure_error");
  r.holonomy_error = detail::read_scalar(member(v, "holonomy_error", "/verification"), "/verification/holonomy_error");
  r.length = detail::read_scalar(member(v, "length", "/verification"), "/verification/length");
  r.tolerance = detail::read_scalar(member(v, "tolerance", "/verification"), "/verification/tolerance");
  const auto& passed = member(v, "passed", "/verification");
  if (!passed.is_boolean()) detail::fail_at("/verification/passed", "expected a boolean");
  r.passed = passed.get<bool>();
  r.diagnostic = detail::read_string(member(v, "diagnostic", "/verification"), "/verification/diagnostic");
  return r;
}

/// Controller from the stored Ω and W blocks. Throws ParseError when Ω is not
/// anti-Hermitian; the stored X is not consulted.
inline Controller controller_of(const ReportFile& r) {
  try {
    return Controller(AntiHermitian(r.omega), r.w);
  } catch (const holo::Error& e) {
    throw ParseError(std::string("at /controller: ") + e.what());
  }
}

inline GateSpectrum spectrum_of(const ReportFile& r) { return {r.rotation, r.gammas}; }

/// ‖X_stored - [[Ω, W], [-W†, 0]]‖_F
inline double generator_mismatch(const ReportFile& r) {
  return (r.x - controller_of(r).generator().matrix()).norm();
}

}  // namespace holo::io
