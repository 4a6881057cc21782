#pragma once

#include <filesystem>
#include <istream>
#include <ostream>

#include "pricedisp/observation.hpp"

namespace pricedisp::io {

inline constexpr const char* kPanelHeader =
    "stay_date,booking_date,hotel_id,room_type,website_id,price_gbp,"
    "page_number,num_reviews,star_rating,review_rating";

// Prices are written with round-trip precision.
void write_panel(std::ostream& os, const Panel& panel);

// Parses and validates a panel. The header must match kPanelHeader exactly.
// Throws SchemaMismatch, ParseError (1-based row counting the header as row
// 1, and column) or DuplicateKey (both row numbers).
Panel read_panel(std::istream& is);
Panel ingest_panel(const std::filesystem::path& path);

}  // namespace pricedisp::io
