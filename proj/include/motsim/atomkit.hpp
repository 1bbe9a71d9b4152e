#ifndef MOTSIM_ATOMKIT_HPP_
#define MOTSIM_ATOMKIT_HPP_

#include <string>

#include "motsim/config.hpp"
#include "motsim/constants.hpp"

namespace motsim {

struct AtomSpecies {
    std::string name;
    double mass = 0.0;  // kg

    void validate() const;
};

// Two-level cooling transition. Linewidth and all detunings are angular
// (rad/s); file I/O takes ordinary MHz and multiplies by 2*pi.
struct CoolingTransition {
    double wavelength = 0.0;            // m
    double linewidth = 0.0;             // rad/s
    double g_lower = 0.0;               // Lande g of the lower level
    double g_upper = 0.0;               // Lande g of the upper level
    double f_lower = 0.0;               // total angular momentum, lower
    double f_upper = 0.0;               // total angular momentum, upper
    double saturation_intensity = 0.0;  // W/m^2

    double wavenumber() const { return constants::two_pi / wavelength; }
    void validate() const;
};

struct TransitionPreset {
    AtomSpecies species;
    CoolingTransition transition;
};

AtomSpecies thulium();
AtomSpecies cesium();

// Bundled presets: "Tm410", "Tm530", "Cs852".
TransitionPreset transition_preset(const std::string& name);

// Preset loaded from a key-value file; "transition.preset" selects a
// bundled base and explicit species.* / transition.* keys override it.
TransitionPreset load_transition_preset(const KeyValueConfig& cfg);
void store_transition_preset(const TransitionPreset& p, KeyValueConfig& cfg);

// --- Closed-form cooling theory ---

// hbar*gamma / (2 kB), the minimum of doppler_temperature over detuning.
double doppler_limit(const CoolingTransition& t);

// Equilibrium temperature of two-level Doppler cooling at red detuning
// magnitude `detuning` (rad/s, > 0).
double doppler_temperature(double detuning, const CoolingTransition& t);

// h^2 / (2 lambda^2 m kB), the single-photon-recoil temperature.
double recoil_limit(const AtomSpecies& species, double wavelength);

// s = I / I_sat.
double saturation_parameter(double intensity, const CoolingTransition& t);

struct LockingVelocities {
    double doppler = 0.0;     // v_D = -g_e mu_B B / (hbar k), m/s
    double subdoppler = 0.0;  // v_S = -g_g mu_B B / (hbar k), m/s
};

// Velocities at which the Doppler and sub-Doppler forces vanish in a
// uniform field B (T, signed along the beam axis).
LockingVelocities locking_velocities(double field, const CoolingTransition& t);

// n * lambda_dB^3 with lambda_dB = h / sqrt(2 pi m kB T).
double phase_space_density(double density, double temperature,
                           const AtomSpecies& species);

}  // namespace motsim

#endif
