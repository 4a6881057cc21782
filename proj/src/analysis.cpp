#include "pricedisp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "pricedisp/csv.hpp"
#include "pricedisp/error.hpp"

namespace pricedisp::econometrics {

namespace {

constexpr std::size_t kHistogramBins = 10;

std::string product_label(const std::string& hotel, RoomType room) {
  return hotel + "|" + std::string(pricedisp::to_string(room));
}

double log_or_nan(double x) {
  return x > 0.0 ? std::log(x) : std::numeric_limits<double>::quiet_NaN();
}

std::string dependent_name(Variant variant) {
  switch (variant) {
    case Variant::LogCv:
      return "ln_cv";
    case Variant::LogRange:
      return "ln_range";
    case Variant::Baseline:
    case Variant::DropSingle:
      break;
  }
  return "cv";
}

}  // namespace

std::vector<CvRecord> build_cv_records(const Panel& panel) {
  const auto dispersion = dispersion::compute_dispersion(panel);
  std::vector<CvRecord> records;
  records.reserve(dispersion.size());
  for (const auto& d : dispersion) records.push_back(CvRecord{d});

  std::vector<dispersion::GroupKey> keys;
  keys.reserve(records.size());
  for (const auto& r : records) keys.push_back(r.record.key);
  for (const auto& obs : panel) {
    const dispersion::GroupKey key{obs.stay_date, obs.booking_date,
                                   obs.hotel_id, obs.room_type};
    const auto it = std::lower_bound(keys.begin(), keys.end(), key);
    auto& rec = records[static_cast<std::size_t>(it - keys.begin())];
    rec.page_number += obs.page_number;
    rec.num_reviews += static_cast<double>(obs.num_reviews);
    rec.star_rating += obs.star_rating;
    rec.review_rating += obs.review_rating;
  }
  for (auto& rec : records) {
    const auto n = static_cast<double>(rec.record.n_websites);
    rec.page_number /= n;
    rec.num_reviews /= n;
    rec.star_rating /= n;
    rec.review_rating /= n;
  }
  return records;
}

std::string quality_band(double review_rating) {
  if (review_rating >= 9.0) return "Excellent";
  if (review_rating >= 8.0) return "Very Good";
  if (review_rating >= 7.0) return "Good";
  if (review_rating >= 6.0) return "Average";
  return "Satisfactory";
}

std::vector<LagPair> build_lag(const std::vector<CvRecord>& records) {
  using Group = std::tuple<std::string, RoomType, Date>;
  std::map<Group, std::vector<std::pair<Date, std::size_t>>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& key = records[i].record.key;
    groups[{key.hotel_id, key.room_type, key.stay_date}].emplace_back(
        key.booking_date, i);
  }
  std::vector<LagPair> pairs;
  for (auto& [group, days] : groups) {
    std::sort(days.begin(), days.end());
    for (std::size_t j = 1; j < days.size(); ++j) {
      if (days[j].first - days[j - 1].first == 1) {
        pairs.push_back({days[j].second, days[j - 1].second});
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const LagPair& a, const LagPair& b) {
              return a.current < b.current;
            });
  return pairs;
}

R2Battery run_eq1_battery(const Panel& panel) {
  if (panel.empty()) throw EmptyPanel("R^2 battery: empty panel");
  std::map<std::pair<Date, Date>, std::vector<std::size_t>> cells;
  for (std::size_t i = 0; i < panel.size(); ++i) {
    cells[{panel[i].stay_date, panel[i].booking_date}].push_back(i);
  }

  RegressionSpec spec;
  spec.id = "price_on_product_and_website";
  spec.dependent = "price";
  spec.dummy_sets = {"website"};
  spec.absorbed_fixed_effects = {"product"};

  R2Battery battery;
  for (const auto& [cell, rows] : cells) {
    Table table;
    std::vector<double> price;
    std::vector<std::string> product;
    std::vector<std::string> website;
    for (auto i : rows) {
      price.push_back(panel[i].price);
      product.push_back(product_label(panel[i].hotel_id, panel[i].room_type));
      website.push_back(panel[i].website_id);
    }
    table.add_numeric("price", std::move(price));
    table.add_categorical("product", std::move(product));
    table.add_categorical("website", std::move(website));
    try {
      const auto fitted = fit(table, spec);
      battery.rows.push_back({cell.first, cell.second,
                              fitted.regression.n_obs,
                              fitted.regression.r_squared});
    } catch (const Error& e) {
      battery.skipped.push_back({cell.first, cell.second, e.what()});
    }
  }

  for (std::size_t b = 0; b < kHistogramBins; ++b) {
    battery.histogram.push_back(
        {static_cast<double>(b) / kHistogramBins,
         static_cast<double>(b + 1) / kHistogramBins, 0});
  }
  for (const auto& row : battery.rows) {
    auto bin = static_cast<std::size_t>(row.r_squared * kHistogramBins);
    bin = std::min(bin, kHistogramBins - 1);
    ++battery.histogram[bin].count;
  }
  return battery;
}

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::Baseline:
      return "baseline";
    case Variant::DropSingle:
      return "drop-single";
    case Variant::LogCv:
      return "log-cv";
    case Variant::LogRange:
      return "log-range";
  }
  return "baseline";
}

std::optional<Variant> parse_variant(std::string_view text) {
  for (auto v : {Variant::Baseline, Variant::DropSingle, Variant::LogCv,
                 Variant::LogRange}) {
    if (text == to_string(v)) return v;
  }
  return std::nullopt;
}

std::string persistence_term(Variant variant) {
  return dependent_name(variant) + "_lag";
}

RegressionSpec persistence_spec(int model, Variant variant) {
  if (model < 1 || model > kPersistenceModels) {
    throw InvalidConfig("persistence model must be 1..7");
  }
  RegressionSpec spec;
  spec.id = "model" + std::to_string(model) + "_" +
            std::string(to_string(variant));
  spec.dependent = dependent_name(variant);
  spec.regressors = {persistence_term(variant)};
  if (model >= 2) {
    spec.regressors.insert(spec.regressors.end(),
                           {"n_websites", "page_number", "last3"});
  }
  if (model >= 3 && model <= 6) {
    spec.regressors.insert(spec.regressors.end(),
                           {"num_reviews", "star_rating", "review_rating"});
  }
  if (model >= 4 && model <= 6) spec.dummy_sets.push_back("quality");
  if (model >= 5 && model <= 6) spec.dummy_sets.push_back("stay_date");
  if (model == 6) spec.dummy_sets.push_back("hotel");
  if (model == 7) spec.absorbed_fixed_effects.push_back("cell");

  switch (variant) {
    case Variant::Baseline:
      break;
    case Variant::DropSingle:
      spec.sample_filter_description = "both days listed on 2+ websites";
      spec.sample_filter = [](const Table& t, std::size_t i) {
        return t.numeric("n_websites")[i] >= 2.0 &&
               t.numeric("n_websites_lag")[i] >= 2.0;
      };
      break;
    case Variant::LogCv:
    case Variant::LogRange: {
      const std::string dep = spec.dependent;
      const std::string lag = persistence_term(variant);
      spec.sample_filter_description = "positive " + dep + " on both days";
      spec.sample_filter = [dep, lag](const Table& t, std::size_t i) {
        return std::isfinite(t.numeric(dep)[i]) &&
               std::isfinite(t.numeric(lag)[i]);
      };
      break;
    }
  }
  return spec;
}

Table build_persistence_table(const std::vector<CvRecord>& records) {
  const auto pairs = build_lag(records);
  const std::size_t n = pairs.size();
  std::vector<double> cv(n), cv_lag(n), ln_cv(n), ln_cv_lag(n), ln_range(n),
      ln_range_lag(n), websites(n), websites_lag(n), page(n), last3(n),
      reviews(n), stars(n), score(n), lead(n);
  std::vector<std::string> quality(n), stay(n), hotel(n), cell(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& cur = records[pairs[i].current];
    const auto& lag = records[pairs[i].lagged];
    cv[i] = cur.record.cv;
    cv_lag[i] = lag.record.cv;
    ln_cv[i] = log_or_nan(cur.record.cv);
    ln_cv_lag[i] = log_or_nan(lag.record.cv);
    ln_range[i] = log_or_nan(cur.record.range);
    ln_range_lag[i] = log_or_nan(lag.record.range);
    websites[i] = static_cast<double>(cur.record.n_websites);
    websites_lag[i] = static_cast<double>(lag.record.n_websites);
    page[i] = cur.page_number;
    lead[i] = cur.record.days_before_stay();
    last3[i] = lead[i] <= 3 ? 1.0 : 0.0;
    reviews[i] = cur.num_reviews;
    stars[i] = cur.star_rating;
    score[i] = cur.review_rating;
    quality[i] = quality_band(cur.review_rating);
    stay[i] = cur.record.key.stay_date.iso();
    hotel[i] = cur.record.key.hotel_id;
    cell[i] = product_label(hotel[i], cur.record.key.room_type) + "|" + stay[i];
  }
  Table t;
  t.add_numeric("cv", std::move(cv));
  t.add_numeric("cv_lag", std::move(cv_lag));
  t.add_numeric("ln_cv", std::move(ln_cv));
  t.add_numeric("ln_cv_lag", std::move(ln_cv_lag));
  t.add_numeric("ln_range", std::move(ln_range));
  t.add_numeric("ln_range_lag", std::move(ln_range_lag));
  t.add_numeric("n_websites", std::move(websites));
  t.add_numeric("n_websites_lag", std::move(websites_lag));
  t.add_numeric("page_number", std::move(page));
  t.add_numeric("last3", std::move(last3));
  t.add_numeric("num_reviews", std::move(reviews));
  t.add_numeric("star_rating", std::move(stars));
  t.add_numeric("review_rating", std::move(score));
  t.add_numeric("lead", std::move(lead));
  t.add_categorical("quality", std::move(quality));
  t.add_categorical("stay_date", std::move(stay));
  t.add_categorical("hotel", std::move(hotel));
  t.add_categorical("cell", std::move(cell));
  return t;
}

PersistenceRun run_cv_persistence(const std::vector<CvRecord>& records,
                                  const RegressionSpec& spec) {
  if (spec.regressors.empty()) {
    throw InvalidConfig("persistence spec needs the lagged term first");
  }
  const auto table = build_persistence_table(records);
  auto fitted = fit(table, spec);
  const std::string& lag = spec.regressors.front();
  const Term* term = fitted.regression.find(lag);
  if (term == nullptr) {
    throw RankDeficient("persistence: '" + lag +
                        "' is collinear with the intercept or controls");
  }
  PersistenceRun run;
  run.persistence_alpha = term->coefficient;
  run.rows_excluded = fitted.rows_excluded;
  run.result = std::move(fitted.regression);
  return run;
}

LagSweep run_lag_sweep(const std::vector<CvRecord>& records,
                       int max_lag_days) {
  if (max_lag_days < 1) throw InvalidConfig("max_lag_days must be at least 1");
  const auto table = build_persistence_table(records);
  LagSweep sweep;
  for (int k = 1; k <= max_lag_days; ++k) {
    RegressionSpec spec;
    spec.id = "lag_k" + std::to_string(k);
    spec.dependent = "cv";
    spec.regressors = {"cv_lag"};
    const double lead = k;
    spec.sample_filter = [lead](const Table& t, std::size_t i) {
      return t.numeric("lead")[i] == lead;
    };
    try {
      const auto fitted = fit(table, spec);
      const Term* term = fitted.regression.find("cv_lag");
      if (term == nullptr) {
        sweep.skipped.push_back(k);
        continue;
      }
      sweep.rows.push_back({k, term->coefficient, term->ci_low, term->ci_high,
                            fitted.regression.r_squared,
                            fitted.regression.n_obs});
    } catch (const Error&) {
      sweep.skipped.push_back(k);
    }
  }
  return sweep;
}

void write_battery_csv(std::ostream& os, const R2Battery& battery) {
  os << kBatteryHeader << '\n';
  for (const auto& r : battery.rows) {
    os << r.stay_date.iso() << ',' << r.booking_date.iso() << ',' << r.n_obs
       << ',' << csv::format_number(r.r_squared) << '\n';
  }
}

void write_histogram_csv(std::ostream& os, const R2Battery& battery) {
  os << "bin_low,bin_high,count\n";
  for (const auto& b : battery.histogram) {
    os << csv::format_number(b.low) << ',' << csv::format_number(b.high)
       << ',' << b.count << '\n';
  }
}

void write_lag_sweep_csv(std::ostream& os, const LagSweep& sweep) {
  os << kLagSweepHeader << '\n';
  for (const auto& r : sweep.rows) {
    os << r.k << ',' << csv::format_number(r.coefficient) << ','
       << csv::format_number(r.ci_low) << ',' << csv::format_number(r.ci_high)
       << '\n';
  }
}

void write_run_summary_row(std::ostream& os, const std::string& spec_id,
                           const RegressionResult& result) {
  os << spec_id << ',' << result.n_obs << ','
     << csv::format_number(result.r_squared) << ',';
  for (std::size_t i = 0; i < result.dropped_terms.size(); ++i) {
    if (i) os << ';';
    os << result.dropped_terms[i];
  }
  os << '\n';
}

}  // namespace pricedisp::econometrics
