#include "pricedisp/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pricedisp/csv.hpp"
#include "pricedisp/error.hpp"

namespace pricedisp::dispersion {

namespace {

// Welford running mean and sum of squared deviations.
struct Accumulator {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
    min = std::min(min, x);
    max = std::max(max, x);
  }

  double sample_std() const {
    if (n < 2 || max == min) return 0.0;
    return std::sqrt(std::max(0.0, m2) / static_cast<double>(n - 1));
  }
};

SummaryRow summarize(std::string name, const Accumulator& acc) {
  SummaryRow row;
  row.variable = std::move(name);
  row.count = acc.n;
  if (acc.n == 0) return row;
  row.mean = acc.mean;
  row.std = acc.sample_std();
  row.min = acc.min;
  row.max = acc.max;
  return row;
}

}  // namespace

std::vector<DispersionRecord> compute_dispersion(const Panel& panel) {
  std::map<GroupKey, Accumulator> groups;
  for (std::size_t i = 0; i < panel.size(); ++i) {
    const auto& obs = panel[i];
    if (!(obs.price > 0.0)) {
      std::ostringstream os;
      os << "observation " << i << " has nonpositive price " << obs.price;
      throw NonpositivePrice(os.str());
    }
    groups[GroupKey{obs.stay_date, obs.booking_date, obs.hotel_id,
                    obs.room_type}]
        .add(obs.price);
  }

  std::vector<DispersionRecord> records;
  records.reserve(groups.size());
  for (const auto& [key, acc] : groups) {
    DispersionRecord rec;
    rec.key = key;
    rec.n_websites = acc.n;
    rec.mean_price = acc.mean;
    rec.std_price = acc.sample_std();
    rec.cv = acc.n >= 2 ? rec.std_price / acc.mean : 0.0;
    rec.min_price = acc.min;
    rec.max_price = acc.max;
    rec.range = acc.max - acc.min;
    records.push_back(std::move(rec));
  }
  return records;
}

std::map<int, double> mean_price_by_lead_time(const Panel& panel) {
  if (panel.empty()) throw EmptyPanel("mean price by lead time: empty panel");
  std::map<int, std::pair<double, std::size_t>> sums;
  for (const auto& obs : panel) {
    auto& [sum, n] = sums[obs.days_before_stay()];
    sum += obs.price;
    ++n;
  }
  std::map<int, double> table;
  for (const auto& [lead, acc] : sums) {
    table.emplace(lead, acc.first / static_cast<double>(acc.second));
  }
  return table;
}

std::vector<SummaryRow> summary_statistics(
    const Panel& panel, const std::vector<DispersionRecord>& records) {
  Accumulator price;
  for (const auto& obs : panel) price.add(obs.price);
  Accumulator websites;
  Accumulator range;
  Accumulator cv;
  for (const auto& rec : records) {
    websites.add(static_cast<double>(rec.n_websites));
    range.add(rec.range);
    cv.add(rec.cv);
  }
  return {summarize("posted_price", price),
          summarize("n_websites", websites), summarize("range", range),
          summarize("cv", cv)};
}

void write_dispersion_csv(std::ostream& os,
                          const std::vector<DispersionRecord>& records) {
  using csv::format_number;
  os << kDispersionHeader << '\n';
  for (const auto& r : records) {
    os << r.key.stay_date.iso() << ',' << r.key.booking_date.iso() << ','
       << r.key.hotel_id << ',' << to_string(r.key.room_type) << ','
       << r.n_websites << ',' << format_number(r.mean_price) << ','
       << format_number(r.std_price) << ',' << format_number(r.cv) << ','
       << format_number(r.range) << ',' << format_number(r.min_price) << ','
       << format_number(r.max_price) << '\n';
  }
}

void write_lead_time_csv(std::ostream& os,
                         const std::map<int, double>& table) {
  os << kLeadTimeHeader << '\n';
  for (const auto& [lead, mean] : table) {
    os << lead << ',' << csv::format_number(mean) << '\n';
  }
}

void scatter_export(std::ostream& os,
                    const std::vector<DispersionRecord>& records,
                    ScatterKind kind) {
  os << (kind == ScatterKind::Cv ? "mean_price,cv" : "mean_price,std")
     << '\n';
  for (const auto& r : records) {
    os << csv::format_number(r.mean_price) << ','
       << csv::format_number(kind == ScatterKind::Cv ? r.cv : r.std_price)
       << '\n';
  }
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "variable,count,mean,std,min,max\n";
  for (const auto& r : rows) {
    os << r.variable << ',' << r.count << ',' << csv::format_number(r.mean)
       << ',' << csv::format_number(r.std) << ','
       << csv::format_number(r.min) << ',' << csv::format_number(r.max)
       << '\n';
  }
}

}  // namespace pricedisp::dispersion
