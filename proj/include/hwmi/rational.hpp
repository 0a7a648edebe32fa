#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>

namespace hwmi {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline int sign(const Rat& r) { return r.sign(); }

// Integer exponent only; atoms with fractional powers are evaluated in doubles.
Rat pow_int(const Rat& base, long e);

// Accepts "3", "-3", "0.25", "1/3". Returns nullopt on malformed input.
std::optional<Rat> parse_rational(const std::string& s);

std::string rat_to_string(const Rat& r);

// Decimal rendering used by pretty printers ("0.01" instead of "1/100"
// when the denominator is a power of 10-friendly value; falls back to p/q).
std::string rat_to_decimal_string(const Rat& r);

} // namespace hwmi
