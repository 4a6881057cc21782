#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace pricedisp {

// A calendar day. Stored as days since 1970-01-01 so subtraction is exact.
class Date {
 public:
  Date() = default;
  explicit Date(std::chrono::sys_days day) : day_(day) {}
  Date(int year, unsigned month, unsigned day);

  // Strict YYYY-MM-DD; throws InvalidConfig on anything else.
  static Date parse(std::string_view text);
  static bool try_parse(std::string_view text, Date& out);

  std::string iso() const;
  std::chrono::sys_days sys_days() const { return day_; }

  Date plus_days(int n) const { return Date(day_ + std::chrono::days{n}); }

  friend int operator-(const Date& a, const Date& b) {
    return static_cast<int>((a.day_ - b.day_).count());
  }
  friend auto operator<=>(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days day_{};
};

}  // namespace pricedisp
