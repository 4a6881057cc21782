#include "pricedisp/date.hpp"

#include <charconv>
#include <cstdio>

#include "pricedisp/error.hpp"

namespace pricedisp {

namespace {

bool parse_digits(std::string_view text, int& out) {
  for (char ch : text) {
    if (ch < '0' || ch > '9') return false;
  }
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc{} && res.ptr == text.data() + text.size();
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day) {
  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{month},
                                        std::chrono::day{day}};
  if (!ymd.ok()) {
    throw InvalidConfig("invalid calendar date");
  }
  day_ = std::chrono::sys_days{ymd};
}

bool Date::try_parse(std::string_view text, Date& out) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
  int y = 0;
  int m = 0;
  int d = 0;
  if (!parse_digits(text.substr(0, 4), y) ||
      !parse_digits(text.substr(5, 2), m) ||
      !parse_digits(text.substr(8, 2), d)) {
    return false;
  }
  const std::chrono::year_month_day ymd{
      std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
      std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return false;
  out = Date(std::chrono::sys_days{ymd});
  return true;
}

Date Date::parse(std::string_view text) {
  Date out;
  if (!try_parse(text, out)) {
    throw InvalidConfig("not an ISO-8601 date: '" + std::string(text) + "'");
  }
  return out;
}

std::string Date::iso() const {
  const std::chrono::year_month_day ymd{day_};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace pricedisp
