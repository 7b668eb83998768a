// Copyright 2026 The hallqet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hallqet/units.hpp"

#include <array>
#include <utility>

#include "hallqet/errors.hpp"

namespace hallqet {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string out = "invalid parameters";
  for (const auto& p : problems) {
    out += "\n  ";
    out += p;
  }
  return out;
}

struct UnitEntry {
  Dimension dim;
  std::string_view symbol;
  double factor;
};

constexpr std::array kUnits = {
    UnitEntry{Dimension::kDimensionless, "1", 1.0},
    UnitEntry{Dimension::kLength, "m", 1.0},
    UnitEntry{Dimension::kLength, "cm", 1e-2},
    UnitEntry{Dimension::kLength, "mm", 1e-3},
    UnitEntry{Dimension::kLength, "um", 1e-6},
    UnitEntry{Dimension::kLength, "\xC2\xB5m", 1e-6},
    UnitEntry{Dimension::kLength, "\xCE\xBCm", 1e-6},
    UnitEntry{Dimension::kLength, "nm", 1e-9},
    UnitEntry{Dimension::kVelocity, "m/s", 1.0},
    UnitEntry{Dimension::kVelocity, "km/s", 1e3},
    UnitEntry{Dimension::kResistance, "Ohm", 1.0},
    UnitEntry{Dimension::kResistance, "ohm", 1.0},
    UnitEntry{Dimension::kResistance, "\xCE\xA9", 1.0},
    UnitEntry{Dimension::kResistance, "kOhm", 1e3},
    UnitEntry{Dimension::kResistance, "kohm", 1e3},
    UnitEntry{Dimension::kResistance, "k\xCE\xA9", 1e3},
    UnitEntry{Dimension::kResistance, "MOhm", 1e6},
    UnitEntry{Dimension::kCapacitance, "F", 1.0},
    UnitEntry{Dimension::kCapacitance, "pF", 1e-12},
    UnitEntry{Dimension::kCapacitance, "fF", 1e-15},
    UnitEntry{Dimension::kCapacitance, "aF", 1e-18},
    UnitEntry{Dimension::kTemperature, "K", 1.0},
    UnitEntry{Dimension::kTemperature, "mK", 1e-3},
    UnitEntry{Dimension::kTemperature, "uK", 1e-6},
    UnitEntry{Dimension::kAngularFrequency, "rad/s", 1.0},
    UnitEntry{Dimension::kAngularFrequency, "1/s", 1.0},
    UnitEntry{Dimension::kAngularFrequency, "s^-1", 1.0},
    UnitEntry{Dimension::kTime, "s", 1.0},
    UnitEntry{Dimension::kTime, "ns", 1e-9},
    UnitEntry{Dimension::kTime, "ps", 1e-12},
    UnitEntry{Dimension::kEnergy, "J", 1.0},
    UnitEntry{Dimension::kEnergy, "eV", units::eV},
    UnitEntry{Dimension::kEnergy, "meV", units::meV},
    UnitEntry{Dimension::kEnergy, "ueV", units::ueV},
    UnitEntry{Dimension::kEnergyPerLength, "J/m", 1.0},
    UnitEntry{Dimension::kEnergyPerLength, "ueV/um", units::ueV / units::um},
    UnitEntry{Dimension::kEnergyPerLength, "meV/um", units::meV / units::um},
    UnitEntry{Dimension::kCurrent, "A", 1.0},
    UnitEntry{Dimension::kCurrent, "nA", 1e-9},
    UnitEntry{Dimension::kCurrent, "pA", 1e-12},
    UnitEntry{Dimension::kVoltage, "V", 1.0},
    UnitEntry{Dimension::kVoltage, "mV", 1e-3},
    UnitEntry{Dimension::kVoltage, "uV", 1e-6},
};

}  // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

std::string_view dimension_name(Dimension d) {
  switch (d) {
    case Dimension::kDimensionless: return "dimensionless";
    case Dimension::kLength: return "length";
    case Dimension::kVelocity: return "velocity";
    case Dimension::kResistance: return "resistance";
    case Dimension::kCapacitance: return "capacitance";
    case Dimension::kTemperature: return "temperature";
    case Dimension::kAngularFrequency: return "angular frequency";
    case Dimension::kTime: return "time";
    case Dimension::kEnergy: return "energy";
    case Dimension::kEnergyPerLength: return "energy per length";
    case Dimension::kCurrent: return "current";
    case Dimension::kVoltage: return "voltage";
  }
  return "?";
}

std::string_view si_symbol(Dimension d) {
  switch (d) {
    case Dimension::kDimensionless: return "1";
    case Dimension::kLength: return "m";
    case Dimension::kVelocity: return "m/s";
    case Dimension::kResistance: return "Ohm";
    case Dimension::kCapacitance: return "F";
    case Dimension::kTemperature: return "K";
    case Dimension::kAngularFrequency: return "rad/s";
    case Dimension::kTime: return "s";
    case Dimension::kEnergy: return "J";
    case Dimension::kEnergyPerLength: return "J/m";
    case Dimension::kCurrent: return "A";
    case Dimension::kVoltage: return "V";
  }
  return "?";
}

std::optional<double> unit_factor(Dimension d, std::string_view unit) {
  if (unit.empty()) return 1.0;
  for (const auto& u : kUnits) {
    if (u.dim == d && u.symbol == unit) return u.factor;
  }
  return std::nullopt;
}

}  // namespace hallqet
