#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qsl/constants.hpp"
#include "qsl/io.hpp"
#include "qsl/model.hpp"
#include "qsl/propagator.hpp"
#include "qsl/search.hpp"
#include "qsl/speed_limit.hpp"
#include "qsl/synthesis.hpp"

// Command implementations behind the qsl binary.  Kept callable as plain
// functions so tests and the acceptance suite can drive them directly.
// Exit-code contract: 0 = success (and, where applicable, the verification
// passed), 1 = ran but the verification failed or I/O broke, 2 = usage or
// validation error.
namespace qsl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// "start:stop:step" (inclusive stop, small slack for rounding) or a
// comma-separated list; a bare number is a one-point grid.
inline std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::array<double, 3> parts{};
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
      const std::size_t next = text.find(':', pos);
      if ((i < 2) == (next == std::string::npos)) {
        throw std::invalid_argument("grid: expected start:stop:step");
      }
      parts[i] = std::stod(text.substr(pos, next - pos));
      pos = next + 1;
    }
    const auto [start, stop, step] = parts;
    if (!(step > 0.0)) {
      throw std::invalid_argument("grid: step must be > 0");
    }
    if (stop >= start) {
      const auto count =
          static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
      for (long i = 0; i < count; ++i) {
        out.push_back(start + static_cast<double>(i) * step);
      }
    }
  } else {
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) out.push_back(std::stod(tok));
    }
  }
  for (double v : out) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("grid: angles must be >= 0");
    }
  }
  return out;
}

inline double to_radians(double value, bool degrees) {
  return degrees ? value * pi / 180.0 : value;
}

// ---------------------------------------------------------------- bound --

struct BoundOptions {
  std::optional<double> theta;
  std::optional<double> alpha;
  std::optional<double> wavelength;
  std::optional<double> energy;
  std::string units = "natural";
  bool degrees = false;
  bool as_json = false;
};

inline int run_bound(const BoundOptions& opt, std::ostream& out,
                     std::ostream& err) {
  try {
    const int given = (opt.theta ? 1 : 0) + (opt.alpha ? 1 : 0) +
                      (opt.wavelength ? 1 : 0);
    if (given != 1) {
      throw std::invalid_argument(
          "exactly one of --theta, --alpha, --wavelength is required");
    }
    if (opt.units != "natural" && opt.units != "si") {
      throw std::invalid_argument("--units must be 'natural' or 'si'");
    }

    json result;
    result["units"] = opt.units;
    if (opt.wavelength) {
      if (opt.units != "si") {
        throw std::invalid_argument("--wavelength requires --units si");
      }
      if (opt.energy) {
        throw std::invalid_argument("--wavelength conflicts with --energy");
      }
      const auto wb = si::from_wavelength(*opt.wavelength);
      result["wavelength"] = *opt.wavelength;
      result["energy"] = wb.energy_joules;
      result["tau"] = wb.tau_seconds;
      result["bound_product"] = 1.0;
    } else {
      if (!opt.energy) {
        throw std::invalid_argument("--energy is required");
      }
      const double energy = *opt.energy;
      if (opt.theta) {
        const double theta = to_radians(*opt.theta, opt.degrees);
        result["theta"] = theta;
        result["energy"] = energy;
        result["tau"] = opt.units == "si" ? si::min_gate_time(theta, energy)
                                          : min_gate_time(theta, energy);
        result["bound_product"] = detail::gate_time_factor(theta);
      } else {
        const double alpha = to_radians(*opt.alpha, opt.degrees);
        result["alpha"] = alpha;
        result["energy"] = energy;
        result["tau"] = opt.units == "si"
                            ? si::min_rotation_time(alpha, energy)
                            : min_rotation_time(alpha, energy);
        result["bound_product"] = 2.0 * alpha / pi;
      }
    }

    if (opt.as_json) {
      out << result.dump(2) << '\n';
    } else {
      for (const auto& item : result.items()) {
        if (item.value().is_number_float()) {
          out << item.key() << " = " << format_double(item.value()) << '\n';
        } else {
          out << item.key() << " = " << item.value().get<std::string>()
              << '\n';
        }
      }
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "bound: " << e.what() << '\n';
    return kExitUsage;
  }
}

// ----------------------------------------------------------- synthesize --

struct SynthesizeOptions {
  double theta = 0.0;
  double energy = 1.0;
  std::string out_path;
  std::string report_path;  // defaults to <out>.report.json
  bool degrees = false;
  double tol = 1e-9;
};

inline int run_synthesize(const SynthesizeOptions& opt, std::ostream& out,
                          std::ostream& err) {
  SynthesizedGate gate = synthesize_gate({0.0, 1.0, Branch::kAuto});
  GateVerification verification;
  try {
    const double theta = to_radians(opt.theta, opt.degrees);
    if (opt.out_path.empty()) {
      throw std::invalid_argument("--out is required");
    }
    gate = synthesize_gate({theta, opt.energy, Branch::kAuto});
    verification = verify_gate(gate.params, gate.pulse, gate.tau, theta,
                               opt.tol);
  } catch (const std::exception& e) {
    err << "synthesize: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const RunManifest manifest = make_manifest(
        "synthesize", {{"theta", format_double(opt.theta)},
                       {"energy", format_double(opt.energy)},
                       {"out", opt.out_path},
                       {"degrees", opt.degrees ? "true" : "false"},
                       {"tol", format_double(opt.tol)}});

    std::ofstream spec_out(opt.out_path);
    if (!spec_out) {
      throw std::runtime_error("cannot write " + opt.out_path);
    }
    spec_out << spec_to_json({gate.params, gate.pulse}).dump(2) << '\n';
    write_manifest(opt.out_path, manifest);

    const std::string report_path = opt.report_path.empty()
                                        ? opt.out_path + ".report.json"
                                        : opt.report_path;
    std::ofstream report_out(report_path);
    if (!report_out) {
      throw std::runtime_error("cannot write " + report_path);
    }
    report_out << verification_to_json(verification).dump(2) << '\n';
    write_manifest(report_path, manifest);

    out << "tau = " << format_double(verification.tau) << '\n'
        << "product_normalized = "
        << format_double(verification.product_normalized) << '\n'
        << "gate_error = " << format_double(verification.gate_error) << '\n'
        << "saturates = " << (verification.saturates ? "true" : "false")
        << '\n';
    return verification.saturates ? kExitOk : kExitFailure;
  } catch (const std::exception& e) {
    err << "synthesize: " << e.what() << '\n';
    return kExitFailure;
  }
}

// ------------------------------------------------------------- simulate --

struct SimulateOptions {
  std::string spec_path;
  double time = 0.0;
  std::array<double, 4> state{1.0, 0.0, 0.0, 0.0};  // re,im of a1 then a2
  int points = 201;
  bool oracle = false;
  std::int64_t steps = 8192;
  std::string out_path;  // empty: CSV on stdout
};

inline int run_simulate(const SimulateOptions& opt, std::ostream& out,
                        std::ostream& err) {
  try {
    const HamiltonianSpec spec = load_spec(opt.spec_path);
    if (!(opt.time >= 0.0)) {
      throw std::invalid_argument("--time must be >= 0");
    }
    if (opt.points < 1) {
      throw std::invalid_argument("--points must be >= 1");
    }

    QubitState psi0{{opt.state[0], opt.state[1]}, {opt.state[2], opt.state[3]}};
    const double norm = psi0.norm();
    if (std::abs(norm - 1.0) > 1e-9) {
      throw std::invalid_argument("--state must be normalized within 1e-9");
    }
    if (std::abs(norm - 1.0) > 1e-12) {
      err << "simulate: renormalizing input state (|norm - 1| = "
          << format_double(std::abs(norm - 1.0)) << ")\n";
      psi0.a1 /= norm;
      psi0.a2 /= norm;
    }

    const EvolutionRecord rec = sample_trajectory(
        spec.params, spec.pulse, opt.time, psi0,
        static_cast<std::size_t>(opt.points));

    std::ofstream file;
    const bool to_file = !opt.out_path.empty();
    if (to_file) {
      file.open(opt.out_path);
      if (!file) {
        err << "simulate: cannot write " << opt.out_path << '\n';
        return kExitFailure;
      }
    }
    std::ostream& csv = to_file ? file : out;
    std::ostream& summary = to_file ? out : err;

    csv << kTrajectoryCsvHeader;
    if (opt.oracle) csv << ",re_a1_ode,im_a1_ode,re_a2_ode,im_a2_ode";
    csv << '\n';

    double max_dev = 0.0;
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
      csv << trajectory_csv_row(rec.times[i], rec.actions[i], rec.states[i],
                                rec.energies[i]);
      if (opt.oracle) {
        const double t = rec.times[i];
        const auto n = std::max<std::int64_t>(
            1, opt.time > 0.0
                   ? std::llround(static_cast<double>(opt.steps) * t /
                                  opt.time)
                   : opt.steps);
        const QubitState ode =
            t == 0.0 ? psi0
                     : evolve_ode_oracle(spec.params, spec.pulse, t, psi0, n);
        max_dev = std::max(
            {max_dev, std::abs(ode.a1 - rec.states[i].a1),
             std::abs(ode.a2 - rec.states[i].a2)});
        csv << ',' << format_double(ode.a1.real()) << ','
            << format_double(ode.a1.imag()) << ','
            << format_double(ode.a2.real()) << ','
            << format_double(ode.a2.imag());
      }
      csv << '\n';
    }

    if (to_file) {
      write_manifest(
          opt.out_path,
          make_manifest("simulate",
                        {{"spec", opt.spec_path},
                         {"time", format_double(opt.time)},
                         {"points", std::to_string(opt.points)},
                         {"oracle", opt.oracle ? "true" : "false"},
                         {"steps", std::to_string(opt.steps)},
                         {"out", opt.out_path}}));
    }
    if (opt.oracle) {
      summary << "max_oracle_deviation = " << format_double(max_dev) << '\n';
    }
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    err << "simulate: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "simulate: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "simulate: " << e.what() << '\n';
    return kExitFailure;
  }
}

// ----------------------------------------------------- verify-bound/sweep --

struct VerifyBoundOptions {
  std::string theta_grid;
  std::string alpha_grid;
  double epsilon = 1e-3;
  std::int64_t budget = 100000;
  int refine = 5;
  std::uint64_t seed = 0;
  std::string out_path;
};

namespace detail_cli {

inline std::vector<BoundReport> run_grid(SearchKind kind,
                                         const std::vector<double>& grid,
                                         const VerifyBoundOptions& opt) {
  std::vector<BoundReport> rows;
  for (double angle : grid) {
    SearchConfig cfg;
    cfg.kind = kind;
    cfg.angle = angle;
    cfg.epsilon = opt.epsilon;
    cfg.budget = opt.budget;
    cfg.refine_sweeps = opt.refine;
    cfg.seed = opt.seed;
    rows.push_back(kind == SearchKind::kGate ? minimize_product(cfg)
                                             : rotation_search(cfg));
  }
  return rows;
}

inline RunManifest sweep_manifest(const char* command,
                                  const VerifyBoundOptions& opt) {
  RunManifest m = make_manifest(
      command, {{"theta-grid", opt.theta_grid},
                {"alpha-grid", opt.alpha_grid},
                {"epsilon", format_double(opt.epsilon)},
                {"budget", std::to_string(opt.budget)},
                {"refine", std::to_string(opt.refine)},
                {"out", opt.out_path}});
  m.seed = opt.seed;
  m.has_seed = true;
  return m;
}

}  // namespace detail_cli

inline int run_verify_bound(const VerifyBoundOptions& opt, std::ostream& out,
                            std::ostream& err) {
  std::vector<BoundReport> rows;
  try {
    if (opt.theta_grid.empty() == opt.alpha_grid.empty()) {
      throw std::invalid_argument(
          "exactly one of --theta-grid, --alpha-grid is required");
    }
    const bool is_theta = !opt.theta_grid.empty();
    const std::vector<double> grid =
        parse_grid(is_theta ? opt.theta_grid : opt.alpha_grid);
    if (grid.empty()) {
      throw std::invalid_argument("grid is empty");
    }
    if (opt.out_path.empty()) {
      throw std::invalid_argument("--out is required");
    }
    rows = detail_cli::run_grid(
        is_theta ? SearchKind::kGate : SearchKind::kRotation, grid, opt);
  } catch (const std::exception& e) {
    err << "verify-bound: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    std::ofstream csv(opt.out_path);
    if (!csv) {
      throw std::runtime_error("cannot write " + opt.out_path);
    }
    csv << kSweepCsvHeader << '\n';
    for (const auto& r : rows) csv << sweep_csv_row(r) << '\n';
    write_manifest(opt.out_path,
                   detail_cli::sweep_manifest("verify-bound", opt));

    double min_gap = std::numeric_limits<double>::infinity();
    bool all_feasible = true;
    for (const auto& r : rows) {
      if (!r.feasible_found) {
        all_feasible = false;
        continue;
      }
      min_gap = std::min(min_gap, r.gap);
    }
    out << "rows = " << rows.size() << '\n';
    out << "min_gap = " << format_double(min_gap) << '\n';
    if (!all_feasible) {
      out << "infeasible_points = true\n";
      return kExitFailure;
    }
    return min_gap >= -kBoundUndershootTolerance ? kExitOk : kExitFailure;
  } catch (const std::exception& e) {
    err << "verify-bound: " << e.what() << '\n';
    return kExitFailure;
  }
}

// Appends rows for both grids to a cumulative CSV (header written only
// when the file is new or empty); manifests accumulate in a .jsonl log.
inline int run_sweep(const VerifyBoundOptions& opt, std::ostream& out,
                     std::ostream& err) {
  std::vector<BoundReport> rows;
  try {
    if (opt.out_path.empty()) {
      throw std::invalid_argument("--out is required");
    }
    std::vector<double> theta_grid, alpha_grid;
    if (!opt.theta_grid.empty()) theta_grid = parse_grid(opt.theta_grid);
    if (!opt.alpha_grid.empty()) alpha_grid = parse_grid(opt.alpha_grid);
    if (theta_grid.empty() && alpha_grid.empty()) {
      throw std::invalid_argument("grid is empty");
    }
    rows = detail_cli::run_grid(SearchKind::kGate, theta_grid, opt);
    const auto alpha_rows =
        detail_cli::run_grid(SearchKind::kRotation, alpha_grid, opt);
    rows.insert(rows.end(), alpha_rows.begin(), alpha_rows.end());
  } catch (const std::exception& e) {
    err << "sweep: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    bool need_header = true;
    {
      std::ifstream probe(opt.out_path);
      need_header = !probe || probe.peek() == std::ifstream::traits_type::eof();
    }
    std::ofstream csv(opt.out_path, std::ios::app);
    if (!csv) {
      throw std::runtime_error("cannot write " + opt.out_path);
    }
    if (need_header) csv << kSweepCsvHeader << '\n';
    for (const auto& r : rows) csv << sweep_csv_row(r) << '\n';
    write_manifest(opt.out_path, detail_cli::sweep_manifest("sweep", opt),
                   /*append=*/true);
    out << "appended " << rows.size() << " rows to " << opt.out_path << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "sweep: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace qsl::cli
