#include "rotnum/commands.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "rotnum/apdiag.hpp"
#include "rotnum/config.hpp"
#include "rotnum/errors.hpp"
#include "rotnum/oracle.hpp"
#include "rotnum/transfer.hpp"

namespace rotnum::cli {

namespace {

using config::ConfigError;
using nlohmann::json;

constexpr double kPi = std::numbers::pi;
constexpr int kCircleGrid = 64;
constexpr std::int64_t kCircleIterations = std::int64_t{1} << 22;

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Loaded {
  config::RunConfig cfg;
  GeneralizedPotential potential;
  IntegratorConfig integrator;
};

Loaded load(const std::string& path) {
  config::RunConfig cfg = config::load_config(path);
  GeneralizedPotential p = config::build_potential(cfg.potential);
  IntegratorConfig integ = config::build_integrator(cfg, p.gamma());
  return {std::move(cfg), std::move(p), integ};
}

// Runs `body`, mapping config problems to exit 1 and numeric ones to exit 2.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

std::string plateau_line(const Plateau& pl) {
  std::ostringstream os;
  os << "# plateau E=[" << fmt17(pl.e_lo) << ", " << fmt17(pl.e_hi) << "] rho=" << fmt17(pl.rho)
     << " (rho/pi=" << std::setprecision(6) << pl.rho / kPi << ") rows=" << pl.width;
  return os.str();
}

}  // namespace

int default_jobs() {
  if (const char* env = std::getenv("ROTNUM_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return omp_get_num_procs();
}

std::string format_csv(const std::vector<ScanRow>& rows) {
  bool any_error = false;
  for (const auto& r : rows) any_error = any_error || r.error.has_value();
  std::string out = "E,rho,error_est,n_steps,x_final";
  out += any_error ? ",error\r\n" : "\r\n";
  for (const auto& r : rows) {
    out += fmt17(r.energy) + "," + fmt17(r.rho) + "," + fmt17(r.error_est) + "," +
           std::to_string(r.n_steps) + "," + fmt17(r.x_final);
    if (any_error) out += "," + csv_quote(r.error.value_or(""));
    out += "\r\n";
  }
  return out;
}

std::string format_json(const std::vector<ScanRow>& rows, const std::vector<Plateau>& plateaus) {
  json doc;
  doc["rows"] = json::array();
  for (const auto& r : rows) {
    json row = {{"E", r.energy},
                {"rho", r.rho},
                {"error_est", r.error_est},
                {"n_steps", r.n_steps},
                {"x_final", r.x_final}};
    if (r.error) row["error"] = *r.error;
    doc["rows"].push_back(row);
  }
  doc["plateaus"] = json::array();
  for (const auto& pl : plateaus) {
    doc["plateaus"].push_back(
        {{"e_lo", pl.e_lo}, {"e_hi", pl.e_hi}, {"rho", pl.rho}, {"width", pl.width}});
  }
  return doc.dump(2) + "\n";
}

int cmd_scan(const ScanOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Loaded run = load(opts.config_path);
    const std::string format = opts.format.value_or(run.cfg.output.format);
    if (format != "csv" && format != "json") {
      throw ConfigError("format must be csv or json");
    }
    const int jobs = opts.jobs.value_or(default_jobs());
    if (jobs < 1) throw ConfigError("--jobs must be >= 1");

    const auto rows = scan(run.potential, config::energies(run.cfg), run.cfg.initial_angle,
                           run.cfg.horizon, run.integrator, jobs);
    const auto plateaus =
        detect_plateaus(rows, run.cfg.plateaus.flat_tol,
                        static_cast<std::size_t>(run.cfg.plateaus.min_width));
    const std::string body = format == "csv" ? format_csv(rows) : format_json(rows, plateaus);

    const auto out_path = opts.out_path ? opts.out_path : run.cfg.output.path;
    std::ostream* summary = &err;
    if (out_path) {
      std::ofstream file(*out_path, std::ios::binary);
      if (!file) throw ConfigError("cannot open output file '" + *out_path + "'");
      file << body;
      summary = &out;
    } else {
      out << body;
    }
    if (format == "csv") {
      for (const auto& pl : plateaus) *summary << plateau_line(pl) << "\n";
    }

    std::size_t failed = 0;
    for (const auto& r : rows) failed += r.error ? 1 : 0;
    if (failed > 0) err << failed << " of " << rows.size() << " energies failed\n";
    return failed == rows.size() ? kExitNumeric : kExitOk;
  });
}

int cmd_apdiag(const std::string& config_path, double eps, std::int64_t tau_range,
               std::optional<std::int64_t> window, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw PreconditionError("--eps must be positive");
    if (tau_range < 0) throw PreconditionError("--range must be nonnegative");
    Loaded run = load(config_path);
    const std::int64_t w = window.value_or(run.cfg.diagnostics.window);
    if (w < 1) throw PreconditionError("--window must be >= 1");

    const auto report =
        epsilon_periods(run.potential, eps, tau_range, w,
                        static_cast<int>(run.cfg.diagnostics.samples_per_gap), default_jobs());
    out << "epsilon: " << fmt17(report.epsilon) << "\n";
    out << "search_range: [" << report.range_lo << ", " << report.range_hi << "]\n";
    out << "window: " << report.window << "\n";
    out << "found_periods (" << report.found_periods.size() << "):";
    for (auto t : report.found_periods) out << " " << t;
    out << "\n";
    if (report.window_bound) {
      out << "relative_denseness_window: " << *report.window_bound << "\n";
    } else {
      out << "relative_denseness_window: not found in range\n";
    }

    const std::int64_t n = run.cfg.horizon;
    const PointSet& g = run.potential.gamma();
    out << "density(n=" << n << "): " << fmt17(density(g, n)) << "\n";
    out << "mean_V[0," << n << "): " << fmt17(mean_value_seq(run.potential.v(), 0, n)) << "\n";
    out << "mean_potential[0, x_" << n << "): "
        << fmt17(mean_value_potential(run.potential, 0.0, g.x(n),
                                      static_cast<int>(run.cfg.diagnostics.quad_points_per_gap)))
        << "\n";
    return kExitOk;
  });
}

int cmd_oracle_compare(const std::string& config_path, double tol, std::ostream& out,
                       std::ostream& err) {
  return guarded(err, [&] {
    if (!(tol > 0.0)) throw PreconditionError("--tol must be positive");
    Loaded run = load(config_path);
    const auto& spec = run.cfg.potential;
    const auto free_q = config::free_background(spec);
    const auto kp = config::kronig_penney(spec);
    const auto period = config::lattice_period(spec);
    const bool piecewise = run.potential.q().constant_on_gaps();
    const std::int64_t n = run.cfg.horizon;
    const double xi = run.cfg.initial_angle;

    if (!free_q && !period && !piecewise) {
      out << "no closed-form oracle; internal consistency only\n";
    }

    bool pass = true;
    auto check = [&](const char* label, double value, double reference) {
      const double dev = std::abs(value - reference);
      const bool ok = dev <= tol;
      pass = pass && ok;
      out << "  " << label << ": " << fmt17(reference) << "  deviation " << fmt17(dev)
          << (ok ? "  PASS" : "  FAIL") << "\n";
    };

    for (double e : config::energies(run.cfg)) {
      const auto direct = estimate_rho(run.potential, e, xi, n, run.integrator);
      const auto birk = estimate_rho_birkhoff(run.potential, e, xi, n, run.integrator);
      out << "E=" << fmt17(e) << "\n";
      out << "  direct: " << fmt17(direct.rho) << " (error_est " << fmt17(direct.error_est) << ")\n";
      check("birkhoff", direct.rho, birk.rho);
      if (free_q) check("closed_form", direct.rho, oracle::closed_form_rho_constant(*free_q, e));
      if (period) {
        const oracle::PeriodicSpec ps{run.potential, *period};
        check("circle_map", direct.rho,
              oracle::circle_map_rho(ps, e, kCircleGrid, kCircleIterations, run.integrator, xi,
                                     default_jobs()));
      }
      if (kp) {
        const double disc = oracle::kp_discriminant(e - kp->q0, kp->spacing, kp->v);
        out << "  discriminant: " << fmt17(disc) << "\n";
        if (std::abs(disc) > 2.0) {
          const double unit = kPi / kp->spacing;
          check("gap_multiple_of_pi/L", direct.rho, unit * std::round(direct.rho / unit));
        }
      }
      if (piecewise) {
        const auto exact = oracle::exact_piecewise_evolve(run.potential, e, xi, n);
        const auto& last = exact.lattice_angles.back();
        check("exact_piecewise", direct.rho, (last.theta - xi) / last.x);
      }
    }
    out << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? kExitOk : kExitNumeric;
  });
}

int cmd_decompose_check(const std::string& config_path, double span, std::ostream& out,
                        std::ostream& err) {
  return guarded(err, [&] {
    if (!(span > 0.0) || !std::isfinite(span)) throw PreconditionError("--span must be positive");
    Loaded run = load(config_path);
    const auto& p = run.potential;
    const PointSet& g = p.gamma();
    const int quad = static_cast<int>(run.cfg.diagnostics.quad_points_per_gap);

    const std::int64_t last = g.locate(span);
    const std::int64_t count = g.x(last) < span ? last + 1 : last;
    const auto background_only = p.without_deltas();
    const double lhs = mean_value_potential(p, 0.0, span, quad);
    const double mean_q = mean_value_potential(background_only, 0.0, span, quad);
    const double coarse_q = mean_value_potential(background_only, 0.0, span, std::max(2, quad / 2));
    const double rhs = mean_q + density(g, count) * mean_value_seq(p.v(), 0, count);
    const double diff = std::abs(lhs - rhs);
    const double quad_tol = std::abs(mean_q - coarse_q);
    const double threshold = 10.0 * (1.0 / span + quad_tol);

    out << "span: " << fmt17(span) << "\n";
    out << "lattice_points: " << count << "\n";
    out << "M(full): " << fmt17(lhs) << "\n";
    out << "M(background) + [Gamma] M(V): " << fmt17(rhs) << "\n";
    out << "difference: " << fmt17(diff) << "\n";
    out << "threshold: " << fmt17(threshold) << "\n";
    out << (diff <= threshold ? "PASS" : "FAIL") << "\n";
    return diff <= threshold ? kExitOk : kExitNumeric;
  });
}

}  // namespace rotnum::cli
