#pragma once

// CODATA 2018 values, SI units throughout.
namespace srslab::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double epsilon0 = 8.8541878128e-12;     // F/m
inline constexpr double speed_of_light = 2.99792458e8;   // m/s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double bohr_radius = 5.29177210903e-11; // m
inline constexpr double amu_kg = 1.66053906660e-27;      // kg

// Dipole matrix elements are stored in units of e*a0; this is the SI value
// of one such unit (C m).
inline constexpr double ea0 = elementary_charge * bohr_radius;

} // namespace srslab::constants
