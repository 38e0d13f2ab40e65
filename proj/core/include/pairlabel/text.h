#ifndef PAIRLABEL_TEXT_H_
#define PAIRLABEL_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>

// Locale-independent number formatting and parsing for CSV files.
namespace pairlabel::text {

// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double v);
// Fixed number of digits after the point, for human-facing tables.
std::string FormatFixed(double v, int digits);

// Whole-string parses; return false on any trailing garbage.
bool ParseDouble(std::string_view s, double& out);
bool ParseSize(std::string_view s, std::size_t& out);

// Quotes a CSV cell when it contains separators or quotes.
std::string CsvCell(std::string_view s);

}  // namespace pairlabel::text

#endif  // PAIRLABEL_TEXT_H_
