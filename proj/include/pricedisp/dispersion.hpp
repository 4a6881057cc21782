#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "pricedisp/observation.hpp"

namespace pricedisp::dispersion {

// A product on a booking day: stay date, booking date, hotel, room type.
struct GroupKey {
  Date stay_date;
  Date booking_date;
  std::string hotel_id;
  RoomType room_type = RoomType::Double;

  friend auto operator<=>(const GroupKey&, const GroupKey&) = default;
};

struct DispersionRecord {
  GroupKey key;
  std::size_t n_websites = 0;
  double mean_price = 0.0;
  // Sample (n - 1) standard deviation; 0 for a single website.
  double std_price = 0.0;
  double cv = 0.0;
  double range = 0.0;
  double min_price = 0.0;
  double max_price = 0.0;

  int days_before_stay() const {
    return key.stay_date - key.booking_date;
  }
};

// One record per group key, ordered by key. Throws NonpositivePrice.
std::vector<DispersionRecord> compute_dispersion(const Panel& panel);

// Arithmetic mean of every posted price at each lead time. Throws
// EmptyPanel.
std::map<int, double> mean_price_by_lead_time(const Panel& panel);

enum class ScatterKind { Cv, Std };

// Per-variable mean, sample std, min and max over the panel (prices) and
// over groups (website counts, range, CV).
struct SummaryRow {
  std::string variable;
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

std::vector<SummaryRow> summary_statistics(
    const Panel& panel, const std::vector<DispersionRecord>& records);

inline constexpr const char* kDispersionHeader =
    "stay_date,booking_date,hotel_id,room_type,n_websites,mean_price,"
    "std_price,cv,range,min_price,max_price";
inline constexpr const char* kLeadTimeHeader = "days_before_stay,mean_price";

void write_dispersion_csv(std::ostream& os,
                          const std::vector<DispersionRecord>& records);
void write_lead_time_csv(std::ostream& os, const std::map<int, double>& table);
// Two columns, mean_price then cv or std, one row per record.
void scatter_export(std::ostream& os,
                    const std::vector<DispersionRecord>& records,
                    ScatterKind kind);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

}  // namespace pricedisp::dispersion
