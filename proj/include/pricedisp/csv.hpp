#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pricedisp::csv {

// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

// Splits one line on commas. Quoting is not supported: none of the schemas
// contain free text.
std::vector<std::string_view> split(std::string_view line);

bool parse_double(std::string_view text, double& out);
bool parse_long(std::string_view text, long& out);

}  // namespace pricedisp::csv
