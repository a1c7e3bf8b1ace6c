#include "mecopt/units.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace mecopt {

namespace {

struct Suffix {
  std::string_view name;
  double factor;
};

template <std::size_t N>
using SuffixTable = std::array<Suffix, N>;

constexpr SuffixTable<6> kBits{{{"b", 1.0}, {"bit", 1.0}, {"kb", 1e3}, {"Mb", 1e6}, {"Gb", 1e9}, {"B", 8.0}}};
constexpr SuffixTable<4> kFrequency{{{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}}};
constexpr SuffixTable<3> kPower{{{"W", 1.0}, {"mW", 1e-3}, {"kW", 1e3}}};
constexpr SuffixTable<5> kTime{{{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"\xC2\xB5s", 1e-6}, {"ns", 1e-9}}};
constexpr SuffixTable<2> kDistance{{{"km", 1.0}, {"m", 1e-3}}};
constexpr SuffixTable<8> kRate{{{"b/s", 1.0},
                               {"bps", 1.0},
                               {"kb/s", 1e3},
                               {"kbps", 1e3},
                               {"Mb/s", 1e6},
                               {"Mbps", 1e6},
                               {"Gb/s", 1e9},
                               {"Gbps", 1e9}}};
constexpr SuffixTable<10> kEnergyPerBit{{{"J/b", 1.0},
                                         {"J/bit", 1.0},
                                         {"mJ/b", 1e-3},
                                         {"uJ/b", 1e-6},
                                         {"nJ/b", 1e-9},
                                         {"nJ/bit", 1e-9},
                                         {"pJ/b", 1e-12},
                                         {"pJ/bit", 1e-12},
                                         {"fJ/b", 1e-15},
                                         {"\xC2\xB5J/b", 1e-6}}};
constexpr SuffixTable<4> kPropagation{{{"s/km", 1.0}, {"ms/km", 1e-3}, {"us/km", 1e-6}, {"\xC2\xB5s/km", 1e-6}}};
constexpr SuffixTable<2> kIntensity{{{"FLOP/b", 1.0}, {"FLOP/bit", 1.0}}};
constexpr SuffixTable<6> kEfficiency{{{"FLOP/J", 1.0},
                                      {"FLOPS/W", 1.0},
                                      {"MFLOPS/W", 1e6},
                                      {"GFLOPS/W", 1e9},
                                      {"GFLOP/J", 1e9},
                                      {"TFLOPS/W", 1e12}}};

template <std::size_t N>
std::optional<double> lookup(const SuffixTable<N>& table, std::string_view suffix) {
  for (const auto& entry : table) {
    if (entry.name == suffix) return entry.factor;
  }
  return std::nullopt;
}

std::optional<double> lookup(Dimension dim, std::string_view suffix) {
  switch (dim) {
    case Dimension::dimensionless: return std::nullopt;
    case Dimension::bits: return lookup(kBits, suffix);
    case Dimension::frequency: return lookup(kFrequency, suffix);
    case Dimension::power: return lookup(kPower, suffix);
    case Dimension::time: return lookup(kTime, suffix);
    case Dimension::distance: return lookup(kDistance, suffix);
    case Dimension::rate: return lookup(kRate, suffix);
    case Dimension::energy_per_bit: return lookup(kEnergyPerBit, suffix);
    case Dimension::propagation: return lookup(kPropagation, suffix);
    case Dimension::intensity: return lookup(kIntensity, suffix);
    case Dimension::efficiency: return lookup(kEfficiency, suffix);
  }
  return std::nullopt;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view to_string(Dimension dim) {
  switch (dim) {
    case Dimension::dimensionless: return "dimensionless";
    case Dimension::bits: return "bits";
    case Dimension::frequency: return "frequency";
    case Dimension::power: return "power";
    case Dimension::time: return "time";
    case Dimension::distance: return "distance";
    case Dimension::rate: return "rate";
    case Dimension::energy_per_bit: return "energy per bit";
    case Dimension::propagation: return "propagation coefficient";
    case Dimension::intensity: return "intensity";
    case Dimension::efficiency: return "efficiency";
  }
  return "unknown";
}

double unit_factor(Dimension dim, std::string_view suffix) {
  suffix = trim(suffix);
  if (suffix.empty()) return 1.0;
  if (auto factor = lookup(dim, suffix)) return *factor;
  throw std::invalid_argument("unit '" + std::string(suffix) + "' is not a valid " +
                              std::string(to_string(dim)) + " unit");
}

double parse_quantity(std::string_view text, Dimension dim) {
  std::string_view s = trim(text);
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();

  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr == s.data()) {
    throw std::invalid_argument("cannot parse quantity '" + std::string(text) + "'");
  }
  std::string_view rest = s.substr(static_cast<std::size_t>(ptr - s.data()));
  return value * unit_factor(dim, rest);
}

}  // namespace mecopt
