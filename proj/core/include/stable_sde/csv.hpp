#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace stable_sde::csv {

/// `%.17g`-style: 17 significant digits, locale independent, round-trips exactly.
std::string format_real(double v);

/// Writes `fields` joined by commas and terminated by '\n'.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Splits one line on commas; no quoting support (none of our schemas need it).
std::vector<std::string> split_row(std::string_view line);

double parse_real(std::string_view text);

}  // namespace stable_sde::csv
