#include "pricedisp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "pricedisp/analysis.hpp"
#include "pricedisp/config.hpp"
#include "pricedisp/csv.hpp"
#include "pricedisp/deviation.hpp"
#include "pricedisp/dispersion.hpp"
#include "pricedisp/error.hpp"
#include "pricedisp/panel_io.hpp"
#include "pricedisp/simulator.hpp"

namespace pricedisp::cli {

namespace fs = std::filesystem;
using csv::format_number;
namespace eq = equilibrium;
namespace ec = econometrics;

OutputSet::OutputSet(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  if (fs::exists(dir_, ec)) {
    if (!fs::is_directory(dir_, ec)) {
      throw Error("--out '" + dir_.string() + "' is not a directory");
    }
  } else {
    if (!fs::create_directories(dir_, ec) || ec) {
      throw Error("cannot create output directory '" + dir_.string() + "'");
    }
    created_dir_ = true;
  }
}

OutputSet::~OutputSet() {
  if (committed_) return;
  std::error_code ec;
  for (const auto& p : written_) fs::remove(p, ec);
  if (created_dir_ && fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
}

fs::path OutputSet::claim(const std::string& name) {
  const fs::path path = dir_ / name;
  written_.push_back(path);
  return path;
}

namespace {

struct Options {
  std::string config_path;
  std::string input;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> spec;
  std::string variant;
  std::optional<std::size_t> grid;
  std::optional<unsigned> threads;
  std::optional<double> c;
  std::optional<double> v;
  std::optional<double> alpha;
  std::optional<int> max_lag_days;
  std::string battery = "all";
};

void write_file(OutputSet& outputs, const std::string& name,
                const std::function<void(std::ostream&)>& body) {
  const auto path = outputs.claim(name);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot write '" + path.string() + "'");
  body(os);
  os.close();
  if (!os) throw Error("error while writing '" + path.string() + "'");
}

config::RunConfig resolve(const Options& o) {
  config::RunConfig rc;
  if (!o.config_path.empty()) rc = config::load_run_config(o.config_path);
  if (o.c) rc.market.c = *o.c;
  if (o.v) rc.market.v = *o.v;
  if (o.alpha) rc.market.alpha = *o.alpha;
  if (o.grid) rc.grid = *o.grid;
  if (o.threads) rc.threads = *o.threads;
  if (o.seed) rc.simulation.seed = *o.seed;
  if (o.spec) rc.regression.spec = *o.spec;
  if (o.max_lag_days) rc.regression.max_lag_days = *o.max_lag_days;
  if (!o.variant.empty() && o.variant != "all") {
    const auto v = ec::parse_variant(o.variant);
    if (!v) throw InvalidConfig("unknown --variant '" + o.variant + "'");
    rc.regression.variant = *v;
  }
  return rc;
}

void require_input(const Options& o) {
  if (o.input.empty()) throw InvalidConfig("--input is required");
  std::error_code ec;
  if (!fs::is_regular_file(o.input, ec)) {
    throw InvalidConfig("--input '" + o.input + "' is not a readable file");
  }
}

void require_out(const Options& o) {
  if (o.out.empty()) throw InvalidConfig("--out is required");
}

// ---------------------------------------------------------------------------

int cmd_equilibrium(const Options& o, std::ostream& err) {
  require_out(o);
  const auto rc = resolve(o);
  rc.market.validate();
  if (rc.grid < 2) throw InvalidConfig("--grid must be at least 2");
  const eq::MixedStrategy strategy(rc.market);
  const auto moments = eq::equilibrium_moments(rc.market);

  OutputSet outputs(o.out);
  write_file(outputs, "equilibrium.csv", [&](std::ostream& os) {
    os << "quantity,value\n"
       << "c," << format_number(rc.market.c) << '\n'
       << "v," << format_number(rc.market.v) << '\n'
       << "alpha," << format_number(rc.market.alpha) << '\n'
       << "p_lower," << format_number(strategy.lower()) << '\n'
       << "p_upper," << format_number(strategy.upper()) << '\n'
       << "profit," << format_number(eq::equilibrium_profit(rc.market)) << '\n'
       << "mean," << format_number(moments.mean) << '\n'
       << "std," << format_number(moments.std) << '\n'
       << "cv," << format_number(moments.cv) << '\n';
  });
  write_file(outputs, "cdf_table.csv", [&](std::ostream& os) {
    os << "price,cdf,density,expected_profit\n";
    const auto rival = [&](double p) { return strategy.cdf(p); };
    const double lo = strategy.lower();
    const double step = (strategy.upper() - lo) / static_cast<double>(rc.grid - 1);
    for (std::size_t i = 0; i < rc.grid; ++i) {
      const double p = i + 1 == rc.grid ? strategy.upper()
                                        : lo + static_cast<double>(i) * step;
      os << format_number(p) << ',' << format_number(strategy.cdf(p)) << ','
         << format_number(strategy.density(p)) << ','
         << format_number(eq::expected_profit(rc.market, p, rival)) << '\n';
    }
  });
  outputs.commit();
  err << "equilibrium: support [" << strategy.lower() << ", "
      << strategy.upper() << "], profit "
      << eq::equilibrium_profit(rc.market) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct VerifyRow {
  std::string check;
  eq::DeviationReport report;
  bool expect_profitable;
};

int cmd_verify(const Options& o, std::ostream& err) {
  require_out(o);
  const auto rc = resolve(o);
  rc.market.validate();
  rc.tie_break.validate();
  const std::size_t grid = rc.grid;

  std::vector<VerifyRow> rows;
  for (const auto& r : eq::check_no_pure_symmetric(rc.market, rc.tie_break, grid)) {
    rows.push_back({"capacity_symmetric_candidate", r, true});
  }
  {
    const double p = eq::pure_equilibrium_no_capacity(rc.market);
    rows.push_back({"unconstrained_equilibrium",
                    eq::verify_pure_equilibrium(eq::GameVariant::Unconstrained,
                                                rc.market, rc.tie_break, p, grid),
                    false});
    for (const auto& r : eq::scan_symmetric_candidates(
             eq::GameVariant::Unconstrained, rc.market, rc.tie_break, grid)) {
      if (r.candidate_price == p) continue;
      rows.push_back({"unconstrained_symmetric_candidate", r, true});
    }
  }
  for (auto state : {eq::DemandState::High, eq::DemandState::Low}) {
    const double p = eq::pure_equilibrium_known_state(rc.market, state);
    rows.push_back({state == eq::DemandState::High ? "known_high_equilibrium"
                                                   : "known_low_equilibrium",
                    eq::verify_pure_equilibrium(eq::known_state_game(state),
                                                rc.market, rc.tie_break, p, grid),
                    false});
  }
  rows.push_back({"mixed_equilibrium",
                  eq::verify_mixed_equilibrium(rc.market, grid), false});

  std::size_t mismatches = 0;
  std::size_t profitable = 0;
  for (const auto& r : rows) {
    if (r.report.profitable != r.expect_profitable) ++mismatches;
    if (r.check == "capacity_symmetric_candidate" && r.report.profitable) {
      ++profitable;
    }
  }

  OutputSet outputs(o.out);
  write_file(outputs, "verify.csv", [&](std::ostream& os) {
    os << "check,candidate_price,best_deviation_price,profit_at_candidate,"
          "profit_at_deviation,profitable,expected_profitable\n";
    for (const auto& r : rows) {
      os << r.check << ',' << format_number(r.report.candidate_price) << ','
         << format_number(r.report.best_deviation_price) << ','
         << format_number(r.report.profit_at_candidate) << ','
         << format_number(r.report.profit_at_deviation) << ','
         << (r.report.profitable ? "true" : "false") << ','
         << (r.expect_profitable ? "true" : "false") << '\n';
    }
  });
  outputs.commit();
  err << "verify: " << profitable << " of " << grid
      << " symmetric candidates have a profitable deviation; " << mismatches
      << " checks disagree with theory\n";
  return mismatches == 0 ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------------------

Panel simulate(const config::RunConfig& rc) {
  auto panel = simulator::simulate_panel(rc.simulation, rc.threads);
  if (rc.sellout) {
    panel = simulator::apply_sellout(panel, rc.sellout->capacity_per_hotel,
                                     rc.sellout->process);
  }
  return panel;
}

int cmd_simulate(const Options& o, std::ostream& err) {
  require_out(o);
  const auto rc = resolve(o);
  rc.simulation.validate();
  const auto panel = simulate(rc);
  OutputSet outputs(o.out);
  write_file(outputs, "panel.csv",
             [&](std::ostream& os) { io::write_panel(os, panel); });
  outputs.commit();
  err << "simulate: " << panel.size() << " observations\n";
  return kOk;
}

// ---------------------------------------------------------------------------

void write_metrics(OutputSet& outputs, const Panel& panel,
                   const std::vector<dispersion::DispersionRecord>& records) {
  write_file(outputs, "dispersion.csv", [&](std::ostream& os) {
    dispersion::write_dispersion_csv(os, records);
  });
  write_file(outputs, "lead_time.csv", [&](std::ostream& os) {
    dispersion::write_lead_time_csv(os,
                                    dispersion::mean_price_by_lead_time(panel));
  });
  write_file(outputs, "scatter_cv.csv", [&](std::ostream& os) {
    dispersion::scatter_export(os, records, dispersion::ScatterKind::Cv);
  });
  write_file(outputs, "scatter_std.csv", [&](std::ostream& os) {
    dispersion::scatter_export(os, records, dispersion::ScatterKind::Std);
  });
  write_file(outputs, "summary.csv", [&](std::ostream& os) {
    dispersion::write_summary_csv(
        os, dispersion::summary_statistics(panel, records));
  });
}

int cmd_metrics(const Options& o, std::ostream& err) {
  require_input(o);
  require_out(o);
  const auto panel = io::ingest_panel(o.input);
  if (panel.empty()) throw EmptyPanel("metrics: panel has no rows");
  const auto records = dispersion::compute_dispersion(panel);
  OutputSet outputs(o.out);
  write_metrics(outputs, panel, records);
  outputs.commit();
  err << "metrics: " << records.size() << " groups from " << panel.size()
      << " observations\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct PersistenceOutcome {
  std::string spec_id;
  int model;
  ec::Variant variant;
  ec::PersistenceRun run;
};

struct RegressionOutputs {
  std::optional<ec::R2Battery> battery;
  std::vector<PersistenceOutcome> persistence;
  std::optional<ec::LagSweep> sweep;
};

RegressionOutputs run_regressions(const Panel& panel,
                                  const config::RunConfig& rc,
                                  const std::string& battery,
                                  bool all_variants, OutputSet& outputs) {
  const bool do_eq1 = battery == "all" || battery == "eq1";
  const bool do_persistence = battery == "all" || battery == "persistence";
  const bool do_sweep = battery == "all" || battery == "lag-sweep";
  if (!do_eq1 && !do_persistence && !do_sweep) {
    throw InvalidConfig("--battery must be eq1, persistence, lag-sweep or all");
  }

  RegressionOutputs out;
  if (do_eq1) {
    out.battery = ec::run_eq1_battery(panel);
    write_file(outputs, "r2_battery.csv", [&](std::ostream& os) {
      ec::write_battery_csv(os, *out.battery);
    });
    write_file(outputs, "r2_histogram.csv", [&](std::ostream& os) {
      ec::write_histogram_csv(os, *out.battery);
    });
  }
  if (do_persistence || do_sweep) {
    const auto records = ec::build_cv_records(panel);
    if (do_persistence) {
      std::vector<ec::Variant> variants{rc.regression.variant};
      if (all_variants) {
        variants = {ec::Variant::Baseline, ec::Variant::DropSingle,
                    ec::Variant::LogCv, ec::Variant::LogRange};
      }
      std::vector<int> models;
      if (rc.regression.spec) {
        models.push_back(*rc.regression.spec);
      } else {
        for (int m = 1; m <= ec::kPersistenceModels; ++m) models.push_back(m);
      }
      for (auto variant : variants) {
        for (int m : models) {
          const auto spec = ec::persistence_spec(m, variant);
          out.persistence.push_back(
              {spec.id, m, variant, ec::run_cv_persistence(records, spec)});
          write_file(outputs, "coefficients_" + spec.id + ".csv",
                     [&](std::ostream& os) {
                       ec::write_coefficients_csv(
                           os, out.persistence.back().run.result);
                     });
        }
      }
      write_file(outputs, "run_summary.csv", [&](std::ostream& os) {
        os << ec::kRunSummaryHeader << '\n';
        for (const auto& p : out.persistence) {
          ec::write_run_summary_row(os, p.spec_id, p.run.result);
        }
      });
    }
    if (do_sweep) {
      out.sweep = ec::run_lag_sweep(records, rc.regression.max_lag_days);
      write_file(outputs, "lag_sweep.csv", [&](std::ostream& os) {
        ec::write_lag_sweep_csv(os, *out.sweep);
      });
    }
  }
  return out;
}

int cmd_regress(const Options& o, std::ostream& err) {
  require_input(o);
  require_out(o);
  const auto rc = resolve(o);
  const auto panel = io::ingest_panel(o.input);
  if (panel.empty()) throw EmptyPanel("regress: panel has no rows");
  OutputSet outputs(o.out);
  const auto results =
      run_regressions(panel, rc, o.battery, o.variant == "all", outputs);
  outputs.commit();
  if (results.battery) {
    err << "regress: " << results.battery->rows.size()
        << " R^2 regressions, " << results.battery->skipped.size()
        << " skipped\n";
    for (const auto& s : results.battery->skipped) {
      err << "  skipped " << s.stay_date.iso() << " / "
          << s.booking_date.iso() << ": " << s.reason << '\n';
    }
  }
  for (const auto& p : results.persistence) {
    err << "regress: " << p.spec_id << " persistence "
        << p.run.persistence_alpha << " (n=" << p.run.result.n_obs
        << ", excluded " << p.run.rows_excluded << ")\n";
  }
  if (results.sweep && !results.sweep->skipped.empty()) {
    err << "regress: lag sweep skipped " << results.sweep->skipped.size()
        << " lags\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------

std::string fixed(double x, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

void write_report(std::ostream& md, const Panel& panel,
                  const std::vector<dispersion::DispersionRecord>& records,
                  const RegressionOutputs& reg, bool simulated) {
  md << "# Price dispersion report\n\n";
  md << (simulated ? "Panel simulated from the equilibrium model"
                   : "Panel ingested from CSV")
     << ": " << panel.size() << " observations, " << records.size()
     << " product-day groups.\n\n";

  md << "## Summary statistics (`summary.csv`)\n\n"
     << "| Variable | N | Mean | Std. dev. | Min | Max |\n"
     << "|---|---|---|---|---|---|\n";
  for (const auto& r : dispersion::summary_statistics(panel, records)) {
    md << "| " << r.variable << " | " << r.count << " | " << fixed(r.mean)
       << " | " << fixed(r.std) << " | " << fixed(r.min) << " | "
       << fixed(r.max) << " |\n";
  }
  md << "\nScatter data: `scatter_cv.csv` (CV against group mean price) and "
        "`scatter_std.csv` (standard deviation against group mean price). "
        "Per-group records: `dispersion.csv`.\n\n";

  if (reg.battery) {
    const auto& rows = reg.battery->rows;
    const auto share = [&](auto pred) {
      if (rows.empty()) return 0.0;
      const auto n = std::count_if(rows.begin(), rows.end(), pred);
      return static_cast<double>(n) / static_cast<double>(rows.size());
    };
    md << "## Website heterogeneity R^2 (`r2_battery.csv`, `r2_histogram.csv`)\n\n"
       << "Price regressed on hotel x room and website effects for each stay "
          "date and booking date: "
       << rows.size() << " regressions, " << reg.battery->skipped.size()
       << " skipped. Share with R^2 > 0.9: "
       << fixed(share([](const auto& r) { return r.r_squared > 0.9; }), 3)
       << "; share with R^2 < 0.5: "
       << fixed(share([](const auto& r) { return r.r_squared < 0.5; }), 3)
       << ".\n\n| R^2 bin | Count |\n|---|---|\n";
    for (const auto& b : reg.battery->histogram) {
      md << "| [" << fixed(b.low, 1) << ", " << fixed(b.high, 1) << ") | "
         << b.count << " |\n";
    }
    md << '\n';
  }

  md << "## Mean price by days before stay (`lead_time.csv`)\n\n"
     << "| Days before stay | Mean price |\n|---|---|\n";
  for (const auto& [lead, mean] : dispersion::mean_price_by_lead_time(panel)) {
    md << "| " << lead << " | " << fixed(mean, 2) << " |\n";
  }
  md << '\n';

  if (reg.sweep) {
    md << "## One-day-ahead CV regressions (`lag_sweep.csv`)\n\n"
       << "| k | Coefficient | 95% CI | N |\n|---|---|---|---|\n";
    for (const auto& r : reg.sweep->rows) {
      md << "| " << r.k << " | " << fixed(r.coefficient) << " | ["
         << fixed(r.ci_low) << ", " << fixed(r.ci_high) << "] | " << r.n_obs
         << " |\n";
    }
    md << '\n';
  }

  if (!reg.persistence.empty()) {
    md << "## Persistence of dispersion (`coefficients_*.csv`, "
          "`run_summary.csv`)\n\n"
       << "| Spec | Variant | Lagged coefficient | Std. error | N | Excluded | "
          "R^2 |\n|---|---|---|---|---|---|---|\n";
    for (const auto& p : reg.persistence) {
      const auto& t = p.run.result.at(ec::persistence_term(p.variant));
      md << "| " << p.model << " | " << ec::to_string(p.variant) << " | "
         << fixed(t.coefficient) << " | " << fixed(t.std_error, 5) << " | "
         << p.run.result.n_obs << " | " << p.run.rows_excluded << " | "
         << fixed(p.run.result.r_squared, 3) << " |\n";
    }
    md << '\n';
  }
}

int cmd_report(const Options& o, std::ostream& err) {
  require_out(o);
  const auto rc = resolve(o);
  const bool simulated = o.input.empty();
  if (!simulated) require_input(o);
  const Panel panel = simulated ? simulate(rc) : io::ingest_panel(o.input);
  if (panel.empty()) throw EmptyPanel("report: panel has no rows");
  const auto records = dispersion::compute_dispersion(panel);

  OutputSet outputs(o.out);
  if (simulated) {
    write_file(outputs, "panel.csv",
               [&](std::ostream& os) { io::write_panel(os, panel); });
  }
  write_metrics(outputs, panel, records);
  const auto reg = run_regressions(panel, rc, "all", o.variant == "all" || o.variant.empty(), outputs);
  write_file(outputs, "report.md", [&](std::ostream& os) {
    write_report(os, panel, records, reg, simulated);
  });
  outputs.commit();
  err << "report: wrote " << (outputs.dir() / "report.md").string() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Pricing-game equilibrium and price dispersion toolkit",
               "pricedisp"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON run configuration")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory");
  };
  auto add_market = [&](CLI::App* sub) {
    sub->add_option("--c", o.c, "Marginal cost");
    sub->add_option("--v", o.v, "Reservation value");
    sub->add_option("--alpha", o.alpha, "High-demand probability");
    sub->add_option("--grid", o.grid, "Price grid points");
  };
  auto add_regress = [&](CLI::App* sub) {
    sub->add_option("--spec", o.spec, "Persistence model 1..7")
        ->check(CLI::Range(1, ec::kPersistenceModels));
    sub->add_option("--variant", o.variant,
                    "baseline, drop-single, log-cv, log-range or all")
        ->check(CLI::IsMember({"baseline", "drop-single", "log-cv",
                               "log-range", "all"}));
    sub->add_option("--max-lag", o.max_lag_days, "Lag sweep length");
  };

  auto* equilibrium_cmd =
      app.add_subcommand("equilibrium", "Support, profit, moments, CDF table");
  add_common(equilibrium_cmd);
  add_market(equilibrium_cmd);

  auto* verify_cmd =
      app.add_subcommand("verify", "Deviation checks for the pricing games");
  add_common(verify_cmd);
  add_market(verify_cmd);

  auto* simulate_cmd = app.add_subcommand("simulate", "Write a synthetic panel");
  add_common(simulate_cmd);
  simulate_cmd->add_option("--seed", o.seed, "Master seed");
  simulate_cmd->add_option("--threads", o.threads, "Worker threads")
      ->check(CLI::PositiveNumber);

  auto* metrics_cmd = app.add_subcommand("metrics", "Dispersion metrics");
  add_common(metrics_cmd);
  metrics_cmd->add_option("--input", o.input, "Panel CSV");

  auto* regress_cmd = app.add_subcommand("regress", "Regression batteries");
  add_common(regress_cmd);
  regress_cmd->add_option("--input", o.input, "Panel CSV");
  regress_cmd->add_option("--battery", o.battery,
                          "eq1, persistence, lag-sweep or all")
      ->check(CLI::IsMember({"eq1", "persistence", "lag-sweep", "all"}));
  add_regress(regress_cmd);

  auto* report_cmd =
      app.add_subcommand("report", "Every analysis plus a markdown summary");
  add_common(report_cmd);
  report_cmd->add_option("--input", o.input,
                         "Panel CSV (simulated from --config when omitted)");
  report_cmd->add_option("--seed", o.seed, "Master seed when simulating");
  report_cmd->add_option("--threads", o.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  add_regress(report_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (equilibrium_cmd->parsed()) return cmd_equilibrium(o, err);
    if (verify_cmd->parsed()) return cmd_verify(o, err);
    if (simulate_cmd->parsed()) return cmd_simulate(o, err);
    if (metrics_cmd->parsed()) return cmd_metrics(o, err);
    if (regress_cmd->parsed()) return cmd_regress(o, err);
    if (report_cmd->parsed()) return cmd_report(o, err);
  } catch (const InvalidConfig& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kAnalysisError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kAnalysisError;
  }
  return kUsageError;
}

}  // namespace pricedisp::cli
