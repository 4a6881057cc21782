#include "pricedisp/panel_io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>

#include "pricedisp/csv.hpp"
#include "pricedisp/error.hpp"

namespace pricedisp::io {

namespace {

constexpr std::size_t kColumns = 10;

[[noreturn]] void fail(std::size_t row, std::size_t column,
                       const std::string& what) {
  std::ostringstream os;
  os << "row " << row;
  if (column) os << ", column " << column;
  os << ": " << what;
  throw ParseError(os.str(), row, column);
}

}  // namespace

void write_panel(std::ostream& os, const Panel& panel) {
  os << kPanelHeader << '\n';
  for (const auto& o : panel) {
    os << o.stay_date.iso() << ',' << o.booking_date.iso() << ','
       << o.hotel_id << ',' << to_string(o.room_type) << ',' << o.website_id
       << ',' << csv::format_number(o.price) << ',' << o.page_number << ','
       << o.num_reviews << ',' << o.star_rating << ','
       << csv::format_number(o.review_rating) << '\n';
  }
}

Panel read_panel(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) {
    throw SchemaMismatch("panel: missing header line");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kPanelHeader) {
    throw SchemaMismatch("panel: header must be exactly '" +
                         std::string(kPanelHeader) + "', got '" + line + "'");
  }

  using Key = std::tuple<Date, Date, std::string, RoomType, std::string>;
  std::map<Key, std::size_t> seen;
  Panel panel;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto f = csv::split(line);
    if (f.size() != kColumns) {
      std::ostringstream os;
      os << "expected " << kColumns << " fields, found " << f.size();
      fail(row, 0, os.str());
    }
    PriceObservation o;
    if (!Date::try_parse(f[0], o.stay_date)) fail(row, 1, "stay_date is not YYYY-MM-DD");
    if (!Date::try_parse(f[1], o.booking_date)) fail(row, 2, "booking_date is not YYYY-MM-DD");
    if (o.booking_date > o.stay_date) {
      fail(row, 2, "booking_date " + o.booking_date.iso() +
                       " is after stay_date " + o.stay_date.iso());
    }
    if (f[2].empty()) fail(row, 3, "hotel_id is empty");
    o.hotel_id = std::string(f[2]);
    const auto room = parse_room_type(f[3]);
    if (!room) fail(row, 4, "room_type must be 'single' or 'double'");
    o.room_type = *room;
    if (f[4].empty()) fail(row, 5, "website_id is empty");
    o.website_id = std::string(f[4]);
    if (!csv::parse_double(f[5], o.price)) fail(row, 6, "price_gbp is not a number");
    if (!(o.price > 0.0)) fail(row, 6, "price_gbp must be positive");
    long page = 0;
    if (!csv::parse_long(f[6], page) || page < 1) {
      fail(row, 7, "page_number must be a positive integer");
    }
    o.page_number = static_cast<int>(page);
    if (!csv::parse_long(f[7], o.num_reviews) || o.num_reviews < 0) {
      fail(row, 8, "num_reviews must be a nonnegative integer");
    }
    long stars = 0;
    if (!csv::parse_long(f[8], stars) || stars < 0 || stars > 5) {
      fail(row, 9, "star_rating must be an integer in 0..5");
    }
    o.star_rating = static_cast<int>(stars);
    if (!csv::parse_double(f[9], o.review_rating) || o.review_rating < 1.0 ||
        o.review_rating > 10.0) {
      fail(row, 10, "review_rating must be a number in [1, 10]");
    }

    const auto [it, inserted] =
        seen.emplace(Key{o.stay_date, o.booking_date, o.hotel_id, o.room_type,
                         o.website_id},
                     row);
    if (!inserted) {
      std::ostringstream os;
      os << "row " << row << " duplicates row " << it->second
         << " (same stay date, booking date, hotel, room type and website)";
      throw DuplicateKey(os.str(), it->second, row);
    }
    panel.push_back(std::move(o));
  }
  return panel;
}

Panel ingest_panel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaMismatch("panel: cannot open '" + path.string() + "'");
  }
  return read_panel(in);
}

}  // namespace pricedisp::io
