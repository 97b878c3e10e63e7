#pragma once

#include <charconv>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "qsl/model.hpp"
#include "qsl/propagator.hpp"
#include "qsl/pulse.hpp"
#include "qsl/search.hpp"
#include "qsl/synthesis.hpp"

namespace qsl {

inline constexpr char kToolVersion[] = "1.0.0";

using json = nlohmann::json;

// 17 significant digits, '.' decimal separator, locale-independent.
// Enough digits to round-trip any double exactly.
inline std::string format_double(double v) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (res.ec != std::errc()) {
    throw std::runtime_error("number formatting failed");
  }
  return std::string(buf, res.ptr);
}

namespace detail {

inline void reject_unknown_fields(const json& obj,
                                  const std::vector<std::string>& known,
                                  const std::string& context) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const auto& k : known) {
      if (item.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw std::invalid_argument(context + ": unknown field '" + item.key() +
                                  "'");
    }
  }
}

inline double require_number(const json& obj, const std::string& key,
                             const std::string& context) {
  if (!obj.contains(key)) {
    throw std::invalid_argument(context + ": missing field '" + key + "'");
  }
  if (!obj[key].is_number()) {
    throw std::invalid_argument(context + ": field '" + key +
                                "' must be a number");
  }
  return obj[key].get<double>();
}

inline std::vector<double> require_number_array(const json& obj,
                                                const std::string& key,
                                                const std::string& context) {
  if (!obj.contains(key) || !obj[key].is_array()) {
    throw std::invalid_argument(context + ": field '" + key +
                                "' must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : obj[key]) {
    if (!v.is_number()) {
      throw std::invalid_argument(context + ": field '" + key +
                                  "' must contain only numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace detail

struct HamiltonianSpec {
  HamiltonianParams params;
  PulseProfile pulse = PulseProfile::constant(1.0);
};

inline json pulse_to_json(const PulseProfile& pulse) {
  json j;
  if (const auto* c = std::get_if<ConstantPulse>(&pulse.shape())) {
    j["type"] = "constant";
    j["value"] = c->value;
  } else if (const auto* pw = std::get_if<PiecewisePulse>(&pulse.shape())) {
    j["type"] = "piecewise";
    j["breakpoints"] = pw->breakpoints;
    j["values"] = pw->values;
  } else {
    const auto& s = std::get<SampledPulse>(pulse.shape());
    j["type"] = "sampled";
    j["times"] = s.times;
    j["values"] = s.values;
  }
  return j;
}

inline PulseProfile pulse_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw std::invalid_argument("pulse: missing or non-string 'type'");
  }
  const std::string type = j["type"].get<std::string>();
  if (type == "constant") {
    detail::reject_unknown_fields(j, {"type", "value"}, "pulse");
    return PulseProfile::constant(detail::require_number(j, "value", "pulse"));
  }
  if (type == "piecewise") {
    detail::reject_unknown_fields(j, {"type", "breakpoints", "values"},
                                  "pulse");
    return PulseProfile::piecewise(
        detail::require_number_array(j, "breakpoints", "pulse"),
        detail::require_number_array(j, "values", "pulse"));
  }
  if (type == "sampled") {
    detail::reject_unknown_fields(j, {"type", "times", "values"}, "pulse");
    return PulseProfile::sampled(
        detail::require_number_array(j, "times", "pulse"),
        detail::require_number_array(j, "values", "pulse"));
  }
  throw std::invalid_argument("pulse: unknown type '" + type + "'");
}

inline json spec_to_json(const HamiltonianSpec& spec) {
  return {{"e11", spec.params.e11},
          {"e22", spec.params.e22},
          {"e12", spec.params.e12},
          {"phi", spec.params.phi},
          {"pulse", pulse_to_json(spec.pulse)}};
}

// Parses the Hamiltonian spec object; unknown fields are rejected and the
// parameters must pass validation.
inline HamiltonianSpec spec_from_json(const json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("spec: top level must be an object");
  }
  detail::reject_unknown_fields(j, {"e11", "e22", "e12", "phi", "pulse"},
                                "spec");
  HamiltonianSpec spec{
      HamiltonianParams(detail::require_number(j, "e11", "spec"),
                        detail::require_number(j, "e22", "spec"),
                        detail::require_number(j, "e12", "spec"),
                        detail::require_number(j, "phi", "spec")),
      j.contains("pulse") ? pulse_from_json(j["pulse"])
                          : PulseProfile::constant(1.0)};
  require_valid(spec.params);
  return spec;
}

inline HamiltonianSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open spec file: " + path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("spec '" + path + "': " + e.what());
  }
  return spec_from_json(j);
}

inline json verification_to_json(const GateVerification& v) {
  return {{"theta", v.theta},
          {"tau", v.tau},
          {"energy", v.energy},
          {"product_normalized", v.product_normalized},
          {"bound", v.bound},
          {"gate_error", v.gate_error},
          {"saturates", v.saturates}};
}

inline json params_to_json(const HamiltonianParams& p) {
  return {{"e11", p.e11}, {"e22", p.e22}, {"e12", p.e12}, {"phi", p.phi}};
}

inline json bound_report_to_json(const BoundReport& r) {
  return {{"kind", r.kind},
          {"angle", r.angle},
          {"bound", r.bound},
          {"best_product", r.feasible_found ? json(r.best_product) : json()},
          {"gap", r.feasible_found ? json(r.gap) : json()},
          {"best_params", params_to_json(r.best_params)},
          {"best_action", r.feasible_found ? json(r.best_action) : json()},
          {"gate_error", r.feasible_found ? json(r.gate_error) : json()},
          {"samples_evaluated", r.samples_evaluated},
          {"seed", r.seed},
          {"feasible_found", r.feasible_found},
          {"loose_fidelity", r.loose_fidelity},
          {"degenerate", r.degenerate}};
}

inline constexpr char kSweepCsvHeader[] =
    "kind,angle,bound,best_product,gap,gate_error,samples,seed";

inline std::string sweep_csv_row(const BoundReport& r) {
  std::string row = r.kind;
  row += ',' + format_double(r.angle);
  row += ',' + format_double(r.bound);
  row += ',' + format_double(r.best_product);
  row += ',' + format_double(r.gap);
  row += ',' + format_double(r.gate_error);
  row += ',' + std::to_string(r.samples_evaluated);
  row += ',' + std::to_string(r.seed);
  return row;
}

inline constexpr char kTrajectoryCsvHeader[] =
    "t,F,re_a1,im_a1,re_a2,im_a2,energy";

inline std::string trajectory_csv_row(double t, double action,
                                      const QubitState& s, double energy) {
  std::string row = format_double(t);
  row += ',' + format_double(action);
  row += ',' + format_double(s.a1.real());
  row += ',' + format_double(s.a1.imag());
  row += ',' + format_double(s.a2.real());
  row += ',' + format_double(s.a2.imag());
  row += ',' + format_double(energy);
  return row;
}

// Reproducibility sidecar attached to every output file.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> arguments;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string tool_version = kToolVersion;
  std::string timestamp;  // ISO-8601 UTC
};

inline std::string iso8601_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline RunManifest make_manifest(std::string command,
                                 std::map<std::string, std::string> args) {
  RunManifest m;
  m.command = std::move(command);
  m.arguments = std::move(args);
  m.timestamp = iso8601_now();
  return m;
}

inline json manifest_to_json(const RunManifest& m) {
  json j{{"command", m.command},
         {"arguments", m.arguments},
         {"tool_version", m.tool_version},
         {"timestamp", m.timestamp}};
  if (m.has_seed) j["seed"] = m.seed;
  return j;
}

// Writes `<path>.manifest.json` next to an output file.  Append mode adds
// one JSON object per line to `<path>.manifest.jsonl` instead, so a log
// that grows across runs keeps every manifest.
inline void write_manifest(const std::string& output_path,
                           const RunManifest& m, bool append = false) {
  if (append) {
    std::ofstream out(output_path + ".manifest.jsonl", std::ios::app);
    out << manifest_to_json(m).dump() << '\n';
  } else {
    std::ofstream out(output_path + ".manifest.json");
    out << manifest_to_json(m).dump(2) << '\n';
  }
}

}  // namespace qsl
