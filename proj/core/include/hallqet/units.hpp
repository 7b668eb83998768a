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

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace hallqet {

struct PhysicalConstants {
  static constexpr double hbar = 1.054571817e-34;     // J s
  static constexpr double e_charge = 1.602176634e-19;  // C
  static constexpr double eps0 = 8.8541878128e-12;     // F/m
  static constexpr double kB = 1.380649e-23;           // J/K
};

inline constexpr double kPi = 3.14159265358979323846;

namespace units {

inline constexpr double eV = PhysicalConstants::e_charge;
inline constexpr double meV = 1e-3 * eV;
inline constexpr double ueV = 1e-6 * eV;
inline constexpr double uV = 1e-6;
inline constexpr double um = 1e-6;
inline constexpr double nA = 1e-9;

inline double to_eV(double joules) { return joules / eV; }
inline double from_eV(double ev) { return ev * eV; }

}  // namespace units

enum class Dimension {
  kDimensionless,
  kLength,
  kVelocity,
  kResistance,
  kCapacitance,
  kTemperature,
  kAngularFrequency,
  kTime,
  kEnergy,
  kEnergyPerLength,
  kCurrent,
  kVoltage,
};

std::string_view dimension_name(Dimension d);

// SI base unit symbol used in outputs ("m", "m/s", "Ohm", ...).
std::string_view si_symbol(Dimension d);

// Multiplicative factor converting a value in `unit` to SI for the given
// dimension. An empty unit is accepted for every dimension and means SI.
// Returns nullopt for an unknown or mismatched unit.
std::optional<double> unit_factor(Dimension d, std::string_view unit);

}  // namespace hallqet
