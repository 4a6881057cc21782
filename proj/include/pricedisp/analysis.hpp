#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "pricedisp/dispersion.hpp"
#include "pricedisp/observation.hpp"
#include "pricedisp/regression.hpp"

namespace pricedisp::econometrics {

// A dispersion record joined with the hotel covariates of its group.
// Covariates are averaged over the group's rows.
struct CvRecord {
  dispersion::DispersionRecord record;
  double page_number = 0.0;
  double num_reviews = 0.0;
  double star_rating = 0.0;
  double review_rating = 0.0;
};

std::vector<CvRecord> build_cv_records(const Panel& panel);

// Review-score band used for quality fixed effects.
std::string quality_band(double review_rating);

// Indices into the record list: the same (hotel, room, stay) group observed
// on booking day t (current) and t - 1 (lagged).
struct LagPair {
  std::size_t current = 0;
  std::size_t lagged = 0;
};

// Pairs at exactly one booking day apart; gaps produce no pair. Ordered by
// the current record's index.
std::vector<LagPair> build_lag(const std::vector<CvRecord>& records);

// ---------------------------------------------------------------------------
// Per (stay date, booking date) regression of price on product and website
// effects.

struct BatteryRow {
  Date stay_date;
  Date booking_date;
  std::size_t n_obs = 0;
  double r_squared = 0.0;
};

struct SkippedCell {
  Date stay_date;
  Date booking_date;
  std::string reason;
};

struct HistogramBin {
  double low = 0.0;
  double high = 0.0;
  std::size_t count = 0;
};

struct R2Battery {
  std::vector<BatteryRow> rows;
  std::vector<SkippedCell> skipped;
  // Ten equal bins on [0, 1]; the last bin is closed.
  std::vector<HistogramBin> histogram;
};

R2Battery run_eq1_battery(const Panel& panel);

// ---------------------------------------------------------------------------
// Persistence of dispersion: CV_t on CV_{t-1} with controls.

enum class Variant { Baseline, DropSingle, LogCv, LogRange };

std::string_view to_string(Variant variant);
std::optional<Variant> parse_variant(std::string_view text);

inline constexpr int kPersistenceModels = 7;

// Controls by model:
//   1 lag only; 2 + websites, page, last-3-days dummy; 3 + reviews, stars,
//   review score; 4 + quality dummies; 5 + stay-date dummies; 6 + hotel
//   dummies; 7 lag, websites, page and last-3-days with hotel x stay x room
//   effects absorbed.
RegressionSpec persistence_spec(int model, Variant variant);

// Name of the lagged dependent variable for a variant.
std::string persistence_term(Variant variant);

// Lagged-pair table with columns cv, cv_lag, ln_cv, ln_cv_lag, ln_range,
// ln_range_lag, n_websites, n_websites_lag, page_number, last3, num_reviews,
// star_rating, review_rating and categoricals quality, stay_date, hotel,
// cell. Log columns are NaN where the level is zero.
Table build_persistence_table(const std::vector<CvRecord>& records);

struct PersistenceRun {
  RegressionResult result;
  std::size_t rows_excluded = 0;
  double persistence_alpha = 0.0;
};

// Throws RankDeficient if the lagged term is collinear with the controls
// (for example a constant CV series).
PersistenceRun run_cv_persistence(const std::vector<CvRecord>& records,
                                  const RegressionSpec& spec);

// ---------------------------------------------------------------------------
// One-day-ahead sweep: for k = 1..max, CV at lead k on CV at lead k + 1.

struct LagSweepRow {
  int k = 0;
  double coefficient = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double r_squared = 0.0;
  std::size_t n_obs = 0;
};

struct LagSweep {
  std::vector<LagSweepRow> rows;
  std::vector<int> skipped;
};

LagSweep run_lag_sweep(const std::vector<CvRecord>& records, int max_lag_days);

inline constexpr const char* kLagSweepHeader = "lag_k,coefficient,ci_low,ci_high";
inline constexpr const char* kBatteryHeader = "stay_date,booking_date,n_obs,r_squared";
inline constexpr const char* kRunSummaryHeader =
    "spec_id,n_obs,r_squared,dropped_terms";

void write_battery_csv(std::ostream& os, const R2Battery& battery);
void write_histogram_csv(std::ostream& os, const R2Battery& battery);
void write_lag_sweep_csv(std::ostream& os, const LagSweep& sweep);
// dropped_terms are joined with ';'.
void write_run_summary_row(std::ostream& os, const std::string& spec_id,
                           const RegressionResult& result);

}  // namespace pricedisp::econometrics
