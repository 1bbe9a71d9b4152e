#ifndef MOTSIM_FORCES_HPP_
#define MOTSIM_FORCES_HPP_

#include "motsim/atomkit.hpp"
#include "motsim/fieldgeom.hpp"
#include "motsim/vec3.hpp"

namespace motsim {

struct ForceModelParams {
    // Sub-Doppler friction coefficient in units of hbar k^2. The default
    // is strong enough that the narrow feature wins against Doppler
    // diffusion (as polarization-gradient friction does in practice)
    // while keeping the 1 us default step inside the stability bound.
    double subdoppler_strength = 2.0;
    // Capture velocity v_c of the sub-Doppler force (m/s); 0 selects the
    // default min(gamma/(2k) * sqrt(s_total), sqrt(hbar*gamma/(2m)) / 3).
    double subdoppler_capture = 0.0;
    // Scale of the sub-Doppler equilibrium temperature law
    // kB T = C_T * hbar gamma^2 s_total / (8 F_lower |delta|) + kB T_0.
    double temperature_constant = 1.0;
    // Residual heating offset T_0 (K). Uncalibrated default.
    double heating_offset = 2e-6;
    bool doppler_enabled = true;
    bool subdoppler_enabled = true;

    void validate() const;
    double capture_velocity(const BeamSet& beams, const CoolingTransition& t,
                            const AtomSpecies& species) const;
};

struct ForceSample {
    Vec3 force{0, 0, 0};        // N
    double scatter_rate = 0.0;  // photons/s, total over beams
    Vec3 diffusion{0, 0, 0};    // momentum diffusion per axis, (kg m/s)^2/s
};

// Six-beam scattering force with an effective two-level Zeeman shift per
// beam. In a uniform field the 1D force vanishes at the Doppler locking
// velocity v_D = -g_e mu_B B/(hbar k).
ForceSample doppler_force(const Vec3& velocity, const Vec3& field,
                          const BeamSet& beams, const CoolingTransition& t);

// Closed-form equilibrium temperature of the sub-Doppler channel (K).
double subdoppler_equilibrium_temperature(double s_total, double detuning,
                                          const CoolingTransition& t,
                                          const ForceModelParams& params);

// Saturable-friction polarization-gradient force: per pair axis
// F = -alpha u / (1 + (u/v_c)^2) with u = v_axis - v_S(B), and companion
// diffusion tapered by the same Lorentzian so that D/alpha is constant.
ForceSample subdoppler_force(const Vec3& velocity, const Vec3& field,
                             const BeamSet& beams, const CoolingTransition& t,
                             const AtomSpecies& species,
                             const ForceModelParams& params);

ForceSample total_force(const Vec3& velocity, const Vec3& position,
                        const BeamSet& beams, const FieldConfig& field,
                        const CoolingTransition& t, const AtomSpecies& species,
                        const ForceModelParams& params);

// Bound on the integrator time step: resolves both the scattering rate
// and the narrow sub-Doppler velocity feature.
double stability_dt_bound(const BeamSet& beams, const CoolingTransition& t,
                          const AtomSpecies& species,
                          const ForceModelParams& params);

// Force context for the ensemble integrator.
struct MotForceField {
    BeamSet beams;
    FieldConfig field;
    CoolingTransition transition;
    AtomSpecies species;
    ForceModelParams params;

    ForceSample operator()(const Vec3& position, const Vec3& velocity) const {
        return total_force(velocity, position, beams, field, transition, species,
                           params);
    }
};

}  // namespace motsim

#endif
