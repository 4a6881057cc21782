#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pricedisp/date.hpp"
#include "pricedisp/equilibrium.hpp"
#include "pricedisp/observation.hpp"

namespace pricedisp::simulator {

struct Interval {
  double min = 0.0;
  double max = 0.0;
};

struct CountRange {
  int min = 1;
  int max = 1;
};

// Shape of a synthetic panel. Observations exist for lead times
// 1..horizon_days before each stay date; alpha_schedule[d - 1] is the
// high-demand probability d days before the stay.
//
// Defaults are desk scale: 200 hotels, 7 consecutive stay dates from
// 2017-11-07, 15 booking days, 1-19 websites per hotel, and the linear
// schedule alpha(d) = 1 - (1 - 0.5) d / 15.
struct SimulationConfig {
  std::size_t num_hotels = 200;
  CountRange websites_per_hotel{1, 19};
  std::vector<Date> stay_dates;
  int horizon_days = 15;
  std::vector<double> alpha_schedule;
  Interval cost_range{36.0, 150.0};
  Interval value_range{160.0, 998.0};
  // Probability a hotel's collected room is a double rather than a single.
  double double_room_share = 0.5;
  // Uncertainty has to resolve toward the stay date unless switched off.
  bool require_monotone_schedule = true;
  std::uint64_t seed = 42;

  static SimulationConfig desk_scale();

  // Throws InvalidConfig.
  void validate() const;
  double alpha_at(int days_before_stay) const;
};

// alpha(d) = 1 - (1 - alpha0) d / horizon for d = 1..horizon.
std::vector<double> linear_alpha_schedule(int horizon, double alpha0 = 0.5);

// Per-hotel draws made once from the (hotel) substream.
struct HotelProfile {
  std::string hotel_id;
  RoomType room_type = RoomType::Double;
  double cost = 0.0;
  double value = 0.0;
  std::vector<std::string> websites;
  int page_number = 1;
  long num_reviews = 0;
  int star_rating = 0;
  double review_rating = 1.0;

  equilibrium::MarketParams params(double alpha) const {
    return {cost, value, alpha};
  }
};

inline constexpr std::size_t kHotelsPerPage = 25;

std::string website_id(int index);
std::vector<HotelProfile> draw_hotels(const SimulationConfig& config);

// Every website listing a hotel draws its price independently from the
// equilibrium mixed strategy at that day's alpha. Rows come out ordered by
// stay date, hotel, booking date, website; the result does not depend on
// `threads`.
Panel simulate_panel(const SimulationConfig& config, unsigned threads = 1);

inline constexpr std::size_t kUnlimitedCapacity =
    std::numeric_limits<std::size_t>::max();

// Bookings arriving for one (hotel, stay date) on each booking day. The
// default is Poisson(mean_per_day); forced_per_day replaces the draw with a
// fixed count.
struct BookingProcess {
  double mean_per_day = 0.0;
  std::optional<long> forced_per_day;
  std::uint64_t seed = 0;
};

// Removes a (hotel, stay date)'s observations after the booking day on which
// cumulative bookings reach capacity. Order of surviving rows is kept.
Panel apply_sellout(const Panel& panel, std::size_t capacity_per_hotel,
                    const BookingProcess& process);

}  // namespace pricedisp::simulator
