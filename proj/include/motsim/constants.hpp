#ifndef MOTSIM_CONSTANTS_HPP_
#define MOTSIM_CONSTANTS_HPP_

// CODATA 2018 values, fixed at build time.
namespace motsim::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double h_planck = 6.62607015e-34;        // J s
inline constexpr double hbar = h_planck / two_pi;         // J s
inline constexpr double k_boltzmann = 1.380649e-23;       // J/K
inline constexpr double mu_bohr = 9.2740100783e-24;       // J/T
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double speed_of_light = 299792458.0;     // m/s
inline constexpr double g_earth = 9.80665;                // m/s^2

}  // namespace motsim::constants

// Conversion factors between user-facing units and SI.
namespace motsim::units {

inline constexpr double gauss = 1e-4;           // T
inline constexpr double gauss_per_cm = 1e-2;    // T/m
inline constexpr double mw_per_cm2 = 10.0;      // W/m^2
inline constexpr double micro_kelvin = 1e-6;    // K
inline constexpr double millimeter = 1e-3;      // m
inline constexpr double micrometer = 1e-6;      // m
inline constexpr double millisecond = 1e-3;     // s
inline constexpr double microsecond = 1e-6;     // s
inline constexpr double nanometer = 1e-9;       // m

// Linewidths and detunings are ordinary frequencies (MHz) at the I/O
// boundary and angular frequencies (rad/s) everywhere inside.
inline constexpr double mhz_angular = motsim::constants::two_pi * 1e6;

}  // namespace motsim::units

#endif
