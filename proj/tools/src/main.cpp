// Command line front end for the finite-network coverage library.
//
// Every subcommand prints a config echo followed by data rows, as CSV
// (default) or JSON.  Runs are deterministic: the same invocation
// produces byte-identical output.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "finitecell/closed_form.hpp"
#include "finitecell/coverage.hpp"
#include "finitecell/design.hpp"
#include "finitecell/model.hpp"
#include "finitecell/monte_carlo.hpp"
#include "finitecell/perturbation.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::ordered_json;

std::string fmt9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// One table: config echo plus uniform rows.
struct Table {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // pre-formatted cells
  std::vector<std::pair<std::string, std::string>> meta;

  void cfg(const std::string& k, const std::string& v) {
    config.emplace_back(k, v);
  }
  void cfg(const std::string& k, double v) { config.emplace_back(k, fmt9(v)); }
  void cfg(const std::string& k, int v) {
    config.emplace_back(k, std::to_string(v));
  }
  void add_meta(const std::string& k, const std::string& v) {
    meta.emplace_back(k, v);
  }

  void write_csv(std::ostream& os) const {
    for (const auto& [k, v] : config) os << "# " << k << "=" << v << "\n";
    for (const auto& [k, v] : meta) os << "# " << k << "=" << v << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
      os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    }
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        os << row[i] << (i + 1 < row.size() ? "," : "\n");
      }
    }
  }

  void write_json(std::ostream& os) const {
    ordered_json j;
    j["config"] = ordered_json::object();
    for (const auto& [k, v] : config) j["config"][k] = v;
    j["rows"] = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json r = ordered_json::object();
      for (std::size_t i = 0; i < row.size(); ++i) r[columns[i]] = row[i];
      j["rows"].push_back(std::move(r));
    }
    j["meta"] = ordered_json::object();
    j["meta"]["version"] = kVersion;
    for (const auto& [k, v] : meta) j["meta"][k] = v;
    os << j.dump(2) << "\n";
  }
};

struct OutputOptions {
  std::string format = "csv";
  std::string path;  // empty: stdout
};

void emit(const Table& t, const OutputOptions& out) {
  std::ostringstream buf;
  if (out.format == "json") {
    t.write_json(buf);
  } else {
    t.write_csv(buf);
  }
  if (out.path.empty()) {
    std::cout << buf.str();
  } else {
    std::ofstream f(out.path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + out.path);
    f << buf.str();
  }
}

// Scenario flags shared by most subcommands.
struct ScenarioArgs {
  double radius = 1.0;
  int n_aps = 3;
  std::optional<double> density;
  double alpha = 3.87;
  double shadow_db = 0.0;
  double tx_dbm = 20.0;
  std::optional<double> noise_dbm;

  finitecell::NetworkModel build() const {
    finitecell::NetworkModel m;
    m.disk.radius = radius;
    m.n_aps = density ? finitecell::ap_count_from_density(*density, m.disk)
                      : n_aps;
    m.path_loss_exponent = alpha;
    m.shadow_sigma_db = shadow_db;
    m.tx_power_dbm = tx_dbm;
    m.noise_power_dbm = noise_dbm;
    m.validate();
    return m;
  }

  void echo(Table& t, const finitecell::NetworkModel& m) const {
    t.cfg("radius_km", m.disk.radius);
    t.cfg("n_aps", m.n_aps);
    t.cfg("density_per_km2",
          finitecell::density_from_ap_count(m.n_aps, m.disk));
    t.cfg("alpha", m.path_loss_exponent);
    t.cfg("shadow_db", m.shadow_sigma_db);
    t.cfg("tx_dbm", m.tx_power_dbm);
    t.cfg("noise_dbm",
          m.noise_power_dbm ? fmt9(*m.noise_power_dbm) : std::string("none"));
  }
};

void attach_scenario(CLI::App* cmd, ScenarioArgs& s, bool with_noise = true) {
  cmd->add_option("--radius", s.radius, "service disk radius, km");
  auto* n = cmd->add_option("--n-aps", s.n_aps, "number of access points");
  auto* lam = cmd->add_option("--density", s.density,
                              "AP density per km^2 (overrides --n-aps)");
  n->excludes(lam);
  cmd->add_option("--alpha", s.alpha, "path loss exponent (> 2)");
  cmd->add_option("--shadow-db", s.shadow_db, "lognormal shadowing spread, dB");
  cmd->add_option("--tx-dbm", s.tx_dbm, "per-AP transmit power, dBm");
  if (with_noise) {
    cmd->add_option("--noise-dbm", s.noise_dbm,
                    "noise power, dBm (omit for interference-limited)");
  }
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("FINITECELL_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;  // library default: hardware concurrency
}

// Evaluates coverage at several offsets in parallel; row order follows
// the input order regardless of scheduling.
std::vector<double> profile_parallel(const finitecell::NetworkModel& m,
                                     double threshold,
                                     const std::vector<double>& offsets,
                                     int threads) {
  std::vector<double> out(offsets.size(), 0.0);
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const std::size_t n_threads = std::min<std::size_t>(
      threads > 0 ? static_cast<std::size_t>(threads) : hw, offsets.size());
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      out[i] = finitecell::coverage_probability(threshold, offsets[i], m);
    }
    return out;
  }
  std::vector<std::exception_ptr> errors(n_threads);
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  for (std::size_t w = 0; w < n_threads; ++w) {
    workers.emplace_back([&, w]() {
      try {
        for (std::size_t i = w; i < offsets.size(); i += n_threads) {
          out[i] = finitecell::coverage_probability(threshold, offsets[i], m);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coverage and capacity statistics for a finite wireless "
               "network on a disk"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI file");

  OutputOptions out;
  app.add_option("--format", out.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--output", out.path, "write output to a file");

  // --- coverage ---
  auto* c_cov = app.add_subcommand(
      "coverage", "SINR coverage probability at given offsets");
  ScenarioArgs s_cov;
  attach_scenario(c_cov, s_cov);
  double cov_thr_db = 0.0;
  std::vector<double> cov_d{0.0};
  c_cov->add_option("--threshold-db", cov_thr_db, "SINR threshold, dB");
  c_cov->add_option("--d", cov_d, "evaluation point offsets, km");

  // --- capacity ---
  auto* c_cap = app.add_subcommand(
      "capacity", "probability that the sum rate clears a target");
  ScenarioArgs s_cap;
  attach_scenario(c_cap, s_cap);
  double cap_c0 = 5.0;
  std::vector<double> cap_d{0.0};
  c_cap->add_option("--c0", cap_c0, "sum rate target, bps/Hz");
  c_cap->add_option("--d", cap_d, "evaluation point offsets, km");

  // --- ergodic ---
  auto* c_erg = app.add_subcommand("ergodic", "mean sum rate, bps/Hz");
  ScenarioArgs s_erg;
  attach_scenario(c_erg, s_erg);
  std::vector<double> erg_d{0.0};
  c_erg->add_option("--d", erg_d, "evaluation point offsets, km");

  // --- worstcap4 ---
  auto* c_w4 = app.add_subcommand(
      "worstcap4",
      "closed-form centre-point ergodic rate at path loss exponent 4");
  std::vector<int> w4_n{3, 5, 10, 20, 30};
  double w4_shadow = 0.0;
  c_w4->add_option("--n-aps-list", w4_n, "AP counts to evaluate");
  c_w4->add_option("--shadow-db", w4_shadow, "lognormal shadowing spread, dB");

  // --- profile ---
  auto* c_prof = app.add_subcommand(
      "profile", "coverage across a radial grid of offsets");
  ScenarioArgs s_prof;
  attach_scenario(c_prof, s_prof);
  double prof_thr_db = 0.0;
  double prof_step = 0.05;
  int prof_threads = 0;
  c_prof->add_option("--threshold-db", prof_thr_db, "SINR threshold, dB");
  c_prof->add_option("--d-step", prof_step,
                     "grid step as a fraction of the radius");
  c_prof->add_option("--threads", prof_threads,
                     "worker threads (0: hardware)");

  // --- sweep-density ---
  auto* c_den = app.add_subcommand(
      "sweep-density", "coverage as the AP density varies");
  ScenarioArgs s_den;
  attach_scenario(c_den, s_den);
  std::vector<double> den_list{1.0, 2.0, 5.0, 10.0, 30.0};
  double den_thr_db = 0.0;
  double den_d = 0.0;
  c_den->add_option("--densities", den_list, "densities per km^2");
  c_den->add_option("--threshold-db", den_thr_db, "SINR threshold, dB");
  c_den->add_option("--d", den_d, "evaluation point offset, km");

  // --- sweep-snr ---
  auto* c_snr = app.add_subcommand(
      "sweep-snr", "coverage as the edge SNR varies");
  ScenarioArgs s_snr;
  attach_scenario(c_snr, s_snr, /*with_noise=*/false);
  std::vector<double> snr_list{-10.0, 0.0, 10.0, 20.0, 30.0};
  double snr_thr_db = 0.0;
  double snr_d = 0.0;
  c_snr->add_option("--snr-db", snr_list, "edge SNR values, dB");
  c_snr->add_option("--threshold-db", snr_thr_db, "SINR threshold, dB");
  c_snr->add_option("--d", snr_d, "evaluation point offset, km");

  // --- design ---
  auto* c_des = app.add_subcommand(
      "design", "smallest AP count meeting a capacity coverage target");
  ScenarioArgs s_des;
  attach_scenario(c_des, s_des);
  double des_c0 = 5.0;
  double des_prob = 0.6;
  int des_nmax = 4096;
  bool des_no_edge = false;
  c_des->add_option("--c0", des_c0, "sum rate target, bps/Hz");
  c_des->add_option("--min-prob", des_prob, "required probability");
  c_des->add_option("--n-max", des_nmax, "search ceiling");
  c_des->add_flag("--no-edge-check", des_no_edge,
                  "skip the disk-edge check for noisy scenarios");

  // --- simulate ---
  auto* c_sim = app.add_subcommand("simulate", "Monte Carlo estimates");
  ScenarioArgs s_sim;
  attach_scenario(c_sim, s_sim);
  std::string sim_metric = "coverage";
  double sim_thr_db = 0.0;
  double sim_c0 = 5.0;
  std::vector<double> sim_d{0.0};
  long sim_trials = 100000;
  std::uint64_t sim_seed = 1;
  bool sim_anti = false;
  int sim_threads = 0;
  c_sim->add_option("--metric", sim_metric, "estimated quantity")
      ->check(CLI::IsMember({"coverage", "capacity", "ergodic"}));
  c_sim->add_option("--threshold-db", sim_thr_db, "SINR threshold, dB");
  c_sim->add_option("--c0", sim_c0, "sum rate target, bps/Hz");
  c_sim->add_option("--d", sim_d, "evaluation point offsets, km");
  c_sim->add_option("--trials", sim_trials, "number of trials");
  c_sim->add_option("--seed", sim_seed, "random seed");
  c_sim->add_flag("--antithetic", sim_anti, "mirror shadowing draws in pairs");
  c_sim->add_option("--threads", sim_threads, "worker threads (0: hardware)");

  // --- perturb-fit ---
  auto* c_fit = app.add_subcommand(
      "perturb-fit",
      "average SIR increment vs offset, with a polynomial fit");
  ScenarioArgs s_fit;
  attach_scenario(c_fit, s_fit, /*with_noise=*/false);
  double fit_dmax = 0.5;
  int fit_points = 11;
  int fit_degree = 3;
  c_fit->add_option("--d-max", fit_dmax, "largest offset, km");
  c_fit->add_option("--points", fit_points, "number of grid points");
  c_fit->add_option("--degree", fit_degree, "fit polynomial degree");

  // Let --format / --output appear after the subcommand name too.
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Table t;

    if (*c_cov) {
      const auto m = s_cov.build();
      t.cfg("command", "coverage");
      s_cov.echo(t, m);
      t.cfg("threshold_db", cov_thr_db);
      t.columns = {"d_km", "threshold_db", "coverage"};
      const double thr = finitecell::linear_from_db(cov_thr_db);
      for (double d : cov_d) {
        const double v = finitecell::coverage_probability(thr, d, m);
        t.rows.push_back({fmt9(d), fmt9(cov_thr_db), fmt9(v)});
      }
    } else if (*c_cap) {
      const auto m = s_cap.build();
      t.cfg("command", "capacity");
      s_cap.echo(t, m);
      t.cfg("c0_bps_hz", cap_c0);
      t.columns = {"d_km", "c0_bps_hz", "capacity_coverage"};
      for (double d : cap_d) {
        const double v = finitecell::capacity_coverage(cap_c0, d, m);
        t.rows.push_back({fmt9(d), fmt9(cap_c0), fmt9(v)});
      }
    } else if (*c_erg) {
      const auto m = s_erg.build();
      t.cfg("command", "ergodic");
      s_erg.echo(t, m);
      t.columns = {"d_km", "ergodic_bps_hz", "upper_limit", "error_estimate"};
      for (double d : erg_d) {
        const auto r = finitecell::ergodic_capacity(d, m);
        t.rows.push_back({fmt9(d), fmt9(r.capacity_bps_hz),
                          fmt9(r.upper_limit), fmt9(r.error_estimate)});
      }
    } else if (*c_w4) {
      t.cfg("command", "worstcap4");
      t.cfg("shadow_db", w4_shadow);
      t.columns = {"n_aps", "capacity_bps_hz", "guard_exceeded"};
      bool any_guard = false;
      for (int n : w4_n) {
        const auto r = finitecell::worst_ergodic_alpha4(n, w4_shadow);
        any_guard = any_guard || r.expansion_guard_exceeded;
        t.rows.push_back({std::to_string(n), fmt9(r.capacity_bps_hz),
                          r.expansion_guard_exceeded ? "1" : "0"});
      }
      if (any_guard) {
        std::cerr << "warning: shadowing spread leaves the expansion's "
                     "convergence region; values are extrapolations\n";
      }
    } else if (*c_prof) {
      const auto m = s_prof.build();
      t.cfg("command", "profile");
      s_prof.echo(t, m);
      t.cfg("threshold_db", prof_thr_db);
      t.cfg("d_step", prof_step);
      t.columns = {"d_km", "coverage"};
      if (!(prof_step > 0.0) || prof_step > 1.0) {
        throw std::invalid_argument("d-step must lie in (0, 1]");
      }
      std::vector<double> offsets;
      for (double q = 0.0; q < 1.0 + 1e-12; q += prof_step) {
        offsets.push_back(std::min(q, 1.0) * m.disk.radius);
      }
      const double thr = finitecell::linear_from_db(prof_thr_db);
      const auto vals = profile_parallel(m, thr, offsets,
                                         resolve_threads(prof_threads));
      for (std::size_t i = 0; i < offsets.size(); ++i) {
        t.rows.push_back({fmt9(offsets[i]), fmt9(vals[i])});
      }
    } else if (*c_den) {
      const auto m = s_den.build();
      t.cfg("command", "sweep-density");
      s_den.echo(t, m);
      t.cfg("threshold_db", den_thr_db);
      t.cfg("d_km", den_d);
      t.columns = {"density_per_km2", "n_aps", "coverage"};
      const double thr = finitecell::linear_from_db(den_thr_db);
      const auto pts = finitecell::density_sweep(m, den_list, thr, den_d);
      for (const auto& p : pts) {
        t.rows.push_back({fmt9(p.density_per_km2), std::to_string(p.n_aps),
                          fmt9(p.coverage)});
      }
    } else if (*c_snr) {
      const auto m = s_snr.build();
      t.cfg("command", "sweep-snr");
      s_snr.echo(t, m);
      t.cfg("threshold_db", snr_thr_db);
      t.cfg("d_km", snr_d);
      t.columns = {"snr_db", "noise_dbm", "coverage"};
      const double thr = finitecell::linear_from_db(snr_thr_db);
      const auto pts = finitecell::snr_sweep(m, snr_list, thr, snr_d);
      for (const auto& p : pts) {
        t.rows.push_back(
            {fmt9(p.snr_db), fmt9(p.noise_power_dbm), fmt9(p.coverage)});
      }
    } else if (*c_des) {
      const auto m = s_des.build();
      t.cfg("command", "design");
      s_des.echo(t, m);
      t.cfg("c0_bps_hz", des_c0);
      t.cfg("min_probability", des_prob);
      t.cfg("n_max", des_nmax);
      finitecell::DesignQuery q;
      q.base = m;
      q.min_rate_bps_hz = des_c0;
      q.min_probability = des_prob;
      q.n_max = des_nmax;
      q.check_edge = !des_no_edge;
      const auto r = finitecell::required_aps(q);
      t.columns = {"c0_bps_hz", "min_probability", "n_aps", "achieved",
                   "used_linear_scan"};
      t.rows.push_back({fmt9(des_c0), fmt9(des_prob), std::to_string(r.n_aps),
                        fmt9(r.achieved), r.used_linear_scan ? "1" : "0"});
    } else if (*c_sim) {
      const auto m = s_sim.build();
      t.cfg("command", "simulate");
      s_sim.echo(t, m);
      t.cfg("metric", sim_metric);
      t.cfg("trials", static_cast<int>(sim_trials));
      t.cfg("seed", std::to_string(sim_seed));
      t.cfg("antithetic", sim_anti ? 1 : 0);
      finitecell::SimConfig cfg;
      cfg.trials = sim_trials;
      cfg.seed = sim_seed;
      cfg.antithetic = sim_anti;
      cfg.threads = resolve_threads(sim_threads);
      t.columns = {"metric", "d_km", "value", "std_error", "trials"};
      for (double d : sim_d) {
        finitecell::Estimate e;
        if (sim_metric == "coverage") {
          e = finitecell::estimate_coverage(
              finitecell::linear_from_db(sim_thr_db), d, m, cfg);
        } else if (sim_metric == "capacity") {
          e = finitecell::estimate_capacity_coverage(sim_c0, d, m, cfg);
        } else {
          e = finitecell::estimate_ergodic(d, m, cfg);
        }
        t.rows.push_back({sim_metric, fmt9(d), fmt9(e.value),
                          fmt9(e.std_error), std::to_string(e.trials)});
      }
    } else if (*c_fit) {
      const auto m = s_fit.build();
      t.cfg("command", "perturb-fit");
      s_fit.echo(t, m);
      t.cfg("d_max", fit_dmax);
      t.cfg("points", fit_points);
      t.cfg("degree", fit_degree);
      if (fit_points < 2) {
        throw std::invalid_argument("need at least 2 grid points");
      }
      std::vector<double> ds(static_cast<std::size_t>(fit_points));
      for (int i = 0; i < fit_points; ++i) {
        ds[static_cast<std::size_t>(i)] = fit_dmax * i / (fit_points - 1);
      }
      const double base = finitecell::sir_avg_db(0.0, m);
      std::vector<double> deltas(ds.size());
      for (std::size_t i = 0; i < ds.size(); ++i) {
        deltas[i] =
            ds[i] == 0.0 ? 0.0 : finitecell::sir_avg_db(ds[i], m) - base;
      }
      const auto fit = finitecell::fit_delta_poly(ds, deltas, fit_degree);
      t.columns = {"d_km", "delta_db", "fit_db"};
      for (std::size_t i = 0; i < ds.size(); ++i) {
        double v = 0.0;
        for (std::size_t k = fit.coefficients.size(); k-- > 0;) {
          v = v * ds[i] + fit.coefficients[k];
        }
        t.rows.push_back({fmt9(ds[i]), fmt9(deltas[i]), fmt9(v)});
      }
      for (std::size_t k = 0; k < fit.coefficients.size(); ++k) {
        t.add_meta("coeff_" + std::to_string(k), fmt9(fit.coefficients[k]));
      }
      t.add_meta("residual_rms", fmt9(fit.residual_rms));
      t.add_meta("sir_avg_db_at_centre", fmt9(base));
    }

    emit(t, out);
  } catch (const finitecell::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << " (best n=" << e.best_n()
              << ", value=" << fmt9(e.best_value()) << ")\n";
    return 4;
  } catch (const finitecell::QuadratureError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
