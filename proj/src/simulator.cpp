#include "pricedisp/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>

#include "pricedisp/error.hpp"
#include "pricedisp/rng.hpp"

namespace pricedisp::simulator {

namespace {

// Purpose tags keep the hotel-attribute and price substreams apart.
constexpr std::uint64_t kHotelStream = 1;
constexpr std::uint64_t kPriceStream = 2;
constexpr std::uint64_t kBookingStream = 3;

std::string hotel_id(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "H%03zu", index + 1);
  return buf;
}

}  // namespace

std::string website_id(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "W%02d", index + 1);
  return buf;
}

std::vector<double> linear_alpha_schedule(int horizon, double alpha0) {
  if (horizon < 1) throw InvalidConfig("horizon_days must be at least 1");
  std::vector<double> schedule(static_cast<std::size_t>(horizon));
  for (int d = 1; d <= horizon; ++d) {
    schedule[static_cast<std::size_t>(d - 1)] =
        1.0 - (1.0 - alpha0) * static_cast<double>(d) /
                  static_cast<double>(horizon);
  }
  return schedule;
}

SimulationConfig SimulationConfig::desk_scale() {
  SimulationConfig config;
  const Date first(2017, 11, 7);
  for (int i = 0; i < 7; ++i) config.stay_dates.push_back(first.plus_days(i));
  config.alpha_schedule = linear_alpha_schedule(config.horizon_days);
  return config;
}

void SimulationConfig::validate() const {
  auto fail = [](const std::string& msg) { throw InvalidConfig(msg); };
  if (num_hotels < 1) fail("num_hotels must be at least 1");
  if (websites_per_hotel.min < 1 ||
      websites_per_hotel.max < websites_per_hotel.min) {
    fail("websites_per_hotel needs 1 <= min <= max");
  }
  if (stay_dates.empty()) fail("stay_dates must not be empty");
  {
    auto sorted = stay_dates;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      fail("stay_dates must be distinct");
    }
  }
  if (horizon_days < 1) fail("horizon_days must be at least 1");
  if (alpha_schedule.size() != static_cast<std::size_t>(horizon_days)) {
    std::ostringstream os;
    os << "alpha_schedule has " << alpha_schedule.size()
       << " entries, horizon_days is " << horizon_days;
    fail(os.str());
  }
  for (double a : alpha_schedule) {
    if (!(a > 0.0 && a < 1.0)) fail("alpha_schedule values must lie in (0, 1)");
  }
  if (require_monotone_schedule) {
    for (std::size_t d = 1; d < alpha_schedule.size(); ++d) {
      if (alpha_schedule[d] > alpha_schedule[d - 1]) {
        fail("alpha_schedule must not decrease as the stay date approaches");
      }
    }
  }
  if (!(cost_range.min >= 0.0 && cost_range.max >= cost_range.min)) {
    fail("cost_range needs 0 <= min <= max");
  }
  if (!(value_range.max >= value_range.min)) {
    fail("value_range needs min <= max");
  }
  if (!(value_range.min > cost_range.max)) {
    fail("value_range.min must exceed cost_range.max so that v > c");
  }
  if (!(double_room_share >= 0.0 && double_room_share <= 1.0)) {
    fail("double_room_share must lie in [0, 1]");
  }
}

double SimulationConfig::alpha_at(int days_before_stay) const {
  if (days_before_stay < 1 || days_before_stay > horizon_days) {
    throw InvalidConfig("lead time outside the simulated horizon");
  }
  return alpha_schedule[static_cast<std::size_t>(days_before_stay - 1)];
}

std::vector<HotelProfile> draw_hotels(const SimulationConfig& config) {
  config.validate();
  std::vector<HotelProfile> hotels;
  hotels.reserve(config.num_hotels);
  const int universe = config.websites_per_hotel.max;
  for (std::size_t h = 0; h < config.num_hotels; ++h) {
    rng::Stream stream(rng::substream_seed(config.seed, {kHotelStream, h}));
    HotelProfile hotel;
    hotel.hotel_id = hotel_id(h);
    hotel.cost = stream.uniform(config.cost_range.min, config.cost_range.max);
    hotel.value =
        stream.uniform(config.value_range.min, config.value_range.max);
    hotel.room_type = stream.uniform() < config.double_room_share
                          ? RoomType::Double
                          : RoomType::Single;

    const auto count = stream.uniform_int(config.websites_per_hotel.min,
                                          config.websites_per_hotel.max);
    std::vector<int> sites(static_cast<std::size_t>(universe));
    std::iota(sites.begin(), sites.end(), 0);
    for (std::int64_t i = 0; i < count; ++i) {
      const auto j = stream.uniform_int(i, universe - 1);
      std::swap(sites[static_cast<std::size_t>(i)],
                sites[static_cast<std::size_t>(j)]);
    }
    sites.resize(static_cast<std::size_t>(count));
    std::sort(sites.begin(), sites.end());
    for (int s : sites) hotel.websites.push_back(website_id(s));

    hotel.page_number = static_cast<int>(h / kHotelsPerPage) + 1;
    hotel.star_rating = static_cast<int>(stream.uniform_int(2, 5));
    hotel.review_rating = stream.uniform(6.0, 10.0);
    hotel.num_reviews = std::lround(
        std::exp(stream.uniform(std::log(10.0), std::log(5000.0))));
    hotels.push_back(std::move(hotel));
  }
  return hotels;
}

Panel simulate_panel(const SimulationConfig& config, unsigned threads) {
  const auto hotels = draw_hotels(config);
  const std::size_t n_stays = config.stay_dates.size();
  const std::size_t n_cells = n_stays * hotels.size();

  // Tables of strategies per lead time are shared read-only by the workers.
  std::vector<std::vector<equilibrium::MixedStrategy>> strategies;
  strategies.reserve(hotels.size());
  for (const auto& hotel : hotels) {
    std::vector<equilibrium::MixedStrategy> by_lead;
    by_lead.reserve(static_cast<std::size_t>(config.horizon_days));
    for (int d = 1; d <= config.horizon_days; ++d) {
      by_lead.emplace_back(hotel.params(config.alpha_at(d)));
    }
    strategies.push_back(std::move(by_lead));
  }

  std::vector<Panel> cells(n_cells);
  auto generate = [&](std::size_t cell) {
    const std::size_t stay_index = cell / hotels.size();
    const std::size_t h = cell % hotels.size();
    const HotelProfile& hotel = hotels[h];
    const Date stay = config.stay_dates[stay_index];
    rng::Stream stream(
        rng::substream_seed(config.seed, {kPriceStream, h, stay_index}));
    Panel& out = cells[cell];
    out.reserve(hotel.websites.size() *
                static_cast<std::size_t>(config.horizon_days));
    for (int d = config.horizon_days; d >= 1; --d) {
      const auto& strategy = strategies[h][static_cast<std::size_t>(d - 1)];
      for (const auto& site : hotel.websites) {
        PriceObservation obs;
        obs.stay_date = stay;
        obs.booking_date = stay.plus_days(-d);
        obs.hotel_id = hotel.hotel_id;
        obs.room_type = hotel.room_type;
        obs.website_id = site;
        obs.price = strategy.quantile(stream.uniform());
        obs.page_number = hotel.page_number;
        obs.num_reviews = hotel.num_reviews;
        obs.star_rating = hotel.star_rating;
        obs.review_rating = hotel.review_rating;
        out.push_back(std::move(obs));
      }
    }
  };

  const unsigned workers = std::max(1u, threads);
  if (workers == 1) {
    for (std::size_t cell = 0; cell < n_cells; ++cell) generate(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t cell = next++; cell < n_cells; cell = next++) {
          generate(cell);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  std::size_t total = 0;
  for (const auto& c : cells) total += c.size();
  Panel panel;
  panel.reserve(total);
  for (auto& c : cells) {
    std::move(c.begin(), c.end(), std::back_inserter(panel));
  }
  return panel;
}

Panel apply_sellout(const Panel& panel, std::size_t capacity_per_hotel,
                    const BookingProcess& process) {
  if (capacity_per_hotel < 1) {
    throw InvalidConfig("capacity_per_hotel must be at least 1");
  }
  if (capacity_per_hotel == kUnlimitedCapacity) return panel;

  using Cell = std::tuple<std::string, Date>;
  std::map<Cell, std::vector<Date>> booking_days;
  for (const auto& obs : panel) {
    booking_days[{obs.hotel_id, obs.stay_date}].push_back(obs.booking_date);
  }

  // Last booking date on which a cell still appears in the search results.
  std::map<Cell, Date> sold_out_on;
  for (auto& [cell, days] : booking_days) {
    std::sort(days.begin(), days.end());
    days.erase(std::unique(days.begin(), days.end()), days.end());
    rng::Stream stream(rng::substream_seed(
        process.seed,
        {kBookingStream, rng::fnv1a(std::get<0>(cell)),
         static_cast<std::uint64_t>(
             std::get<1>(cell).sys_days().time_since_epoch().count())}));
    std::size_t booked = 0;
    for (const Date& day : days) {
      const long arrivals = process.forced_per_day
                                ? *process.forced_per_day
                                : stream.poisson(process.mean_per_day);
      booked += static_cast<std::size_t>(std::max(0L, arrivals));
      if (booked >= capacity_per_hotel) {
        sold_out_on.emplace(cell, day);
        break;
      }
    }
  }

  Panel out;
  out.reserve(panel.size());
  for (const auto& obs : panel) {
    const auto it = sold_out_on.find({obs.hotel_id, obs.stay_date});
    if (it != sold_out_on.end() && obs.booking_date > it->second) continue;
    out.push_back(obs);
  }
  return out;
}

}  // namespace pricedisp::simulator
