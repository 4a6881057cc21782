#include "pricedisp/observation.hpp"

namespace pricedisp {

std::string_view to_string(RoomType room) {
  return room == RoomType::Single ? "single" : "double";
}

std::optional<RoomType> parse_room_type(std::string_view text) {
  if (text == "single") return RoomType::Single;
  if (text == "double") return RoomType::Double;
  return std::nullopt;
}

}  // namespace pricedisp
