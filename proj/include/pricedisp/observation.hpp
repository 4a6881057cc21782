#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "pricedisp/date.hpp"

namespace pricedisp {

// Only two-guest rooms are collected.
enum class RoomType { Single, Double };

std::string_view to_string(RoomType room);
std::optional<RoomType> parse_room_type(std::string_view text);

// One posted price: a website's offer for a hotel room on a stay date, as
// seen on a booking date.
struct PriceObservation {
  Date stay_date;
  Date booking_date;
  std::string hotel_id;
  RoomType room_type = RoomType::Double;
  std::string website_id;
  double price = 0.0;
  int page_number = 1;
  long num_reviews = 0;
  int star_rating = 0;
  double review_rating = 1.0;

  int days_before_stay() const { return stay_date - booking_date; }

  // The full identity of a row; rows sharing it are duplicates.
  auto key() const {
    return std::tie(stay_date, booking_date, hotel_id, room_type, website_id);
  }
};

using Panel = std::vector<PriceObservation>;

}  // namespace pricedisp
