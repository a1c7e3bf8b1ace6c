#ifndef MECOPT_UNITS_HPP
#define MECOPT_UNITS_HPP

#include <string_view>

namespace mecopt {

// Physical dimension of a configuration value. Everything is stored in SI
// internally; engineering suffixes are accepted only at the config boundary.
enum class Dimension {
  dimensionless,
  bits,            // b
  frequency,       // Hz
  power,           // W
  time,            // s
  distance,        // km (the one non-SI base: path lengths are always km)
  rate,            // bit/s
  energy_per_bit,  // J/bit
  propagation,     // s/km
  intensity,       // FLOP/bit
  efficiency,      // FLOP/J
};

std::string_view to_string(Dimension dim);

/// Multiplier that converts a value written with `suffix` into the internal
/// unit of `dim`. An empty suffix means the value is already internal.
/// Throws std::invalid_argument for suffixes that do not belong to `dim`.
double unit_factor(Dimension dim, std::string_view suffix);

/// Parses "2.7 GHz", "4e4 pJ/b", "7.5us/km", "inf" or a bare number.
double parse_quantity(std::string_view text, Dimension dim);

}  // namespace mecopt

#endif  // MECOPT_UNITS_HPP
