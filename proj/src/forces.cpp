#include "motsim/forces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace motsim {

namespace {

using namespace motsim::constants;

}  // namespace

void ForceModelParams::validate() const {
    if (subdoppler_strength < 0.0)
        throw std::invalid_argument("ForceModelParams: subdoppler_strength must be >= 0");
    if (subdoppler_capture < 0.0)
        throw std::invalid_argument("ForceModelParams: subdoppler_capture must be >= 0");
    if (!(temperature_constant > 0.0))
        throw std::invalid_argument("ForceModelParams: temperature_constant must be > 0");
    if (heating_offset < 0.0)
        throw std::invalid_argument("ForceModelParams: heating_offset must be >= 0");
}

double ForceModelParams::capture_velocity(const BeamSet& beams,
                                          const CoolingTransition& t,
                                          const AtomSpecies& species) const {
    if (subdoppler_capture > 0.0) return subdoppler_capture;
    const double k = t.wavenumber();
    const double s_tot = beams.total_saturation();
    const double v_light = t.linewidth / (2.0 * k) * std::sqrt(s_tot);
    // Cap well below the thermal velocity at the Doppler limit so the
    // feature stays narrow compared to a Doppler-cooled cloud.
    const double v_doppler =
        std::sqrt(hbar * t.linewidth / (2.0 * species.mass)) / 3.0;
    return std::min(v_light, v_doppler);
}

ForceSample doppler_force(const Vec3& velocity, const Vec3& field,
                          const BeamSet& beams, const CoolingTransition& t) {
    const double k = t.wavenumber();
    const double g = t.linewidth;
    const double s_tot = beams.total_saturation();

    ForceSample out;
    for (const Beam& b : beams.beams) {
        if (b.saturation == 0.0) continue;
        const Vec3 axis = canonical_axis(b.direction);
        // Zeeman shift of the effective two-level resonance, signed along
        // the pair axis; opposite beams of a pair are shifted oppositely.
        const double zeeman =
            -b.helicity * t.g_upper * mu_bohr * dot(field, axis) / hbar;
        const double det = -b.detuning - k * dot(velocity, b.direction) + zeeman;
        const double rate = 0.5 * g * b.saturation /
                            (1.0 + s_tot + 4.0 * det * det / (g * g));
        out.scatter_rate += rate;
        out.force += (hbar * k * rate) * b.direction;
        // Absorption recoil along the beam, emission isotropic; with
        // <dp^2> = 2 D dt, Poisson recoil at rate R gives D = (hbar k)^2 R / 2.
        const double dscale = 0.5 * hbar * hbar * k * k * rate;
        for (int j = 0; j < 3; ++j)
            out.diffusion[j] += dscale * (b.direction[j] * b.direction[j] + 1.0 / 3.0);
    }
    return out;
}

double subdoppler_equilibrium_temperature(double s_total, double detuning,
                                          const CoolingTransition& t,
                                          const ForceModelParams& params) {
    if (detuning == 0.0)
        throw std::invalid_argument("subdoppler model: detuning must be nonzero");
    const double g = t.linewidth;
    const double kb_t = params.temperature_constant * hbar * g * g * s_total /
                        (8.0 * t.f_lower * std::abs(detuning));
    return kb_t / k_boltzmann + params.heating_offset;
}

ForceSample subdoppler_force(const Vec3& velocity, const Vec3& field,
                             const BeamSet& beams, const CoolingTransition& t,
                             const AtomSpecies& species,
                             const ForceModelParams& params) {
    params.validate();
    ForceSample out;
    const double s_tot = beams.total_saturation();
    if (s_tot == 0.0 || params.subdoppler_strength == 0.0) return out;

    const double k = t.wavenumber();
    const double alpha = params.subdoppler_strength * hbar * k * k;
    const double v_c = params.capture_velocity(beams, t, species);
    const double t_eq =
        subdoppler_equilibrium_temperature(s_tot, beams.mean_detuning(), t, params);
    const double d_eq = alpha * k_boltzmann * t_eq;

    const std::array<Vec3, 3> axes = beams.pair_axes();
    const std::array<int, 3> orient = beams.pair_orientations();
    for (int a = 0; a < 3; ++a) {
        const Vec3& axis = axes[a];
        // Lock velocity with the same helicity convention as the Doppler
        // channel, so the two zeros separate in proportion to g_e - g_g.
        const double v_lock =
            -orient[a] * t.g_lower * mu_bohr * dot(field, axis) / (hbar * k);
        const double u = dot(velocity, axis) - v_lock;
        const double taper = 1.0 / (1.0 + (u / v_c) * (u / v_c));
        // The polarization-gradient mechanism itself dephases once the
        // two lock velocities separate beyond the capture range; the same
        // Lorentzian suppresses force and diffusion together, so D/alpha
        // is field-independent.
        const double sep =
            (t.g_upper - t.g_lower) * mu_bohr * dot(field, axis) / (hbar * k);
        const double inhibit = 1.0 / (1.0 + (sep / v_c) * (sep / v_c));
        out.force += (-alpha * u * taper * inhibit) * axis;
        for (int j = 0; j < 3; ++j)
            out.diffusion[j] += d_eq * taper * inhibit * axis[j] * axis[j];
    }
    return out;
}

ForceSample total_force(const Vec3& velocity, const Vec3& position,
                        const BeamSet& beams, const FieldConfig& field,
                        const CoolingTransition& t, const AtomSpecies& species,
                        const ForceModelParams& params) {
    const Vec3 b = field_at(position, field);
    ForceSample out;
    if (params.doppler_enabled) {
        const ForceSample d = doppler_force(velocity, b, beams, t);
        out.force += d.force;
        out.diffusion += d.diffusion;
        out.scatter_rate += d.scatter_rate;
    }
    if (params.subdoppler_enabled) {
        const ForceSample s = subdoppler_force(velocity, b, beams, t, species, params);
        out.force += s.force;
        out.diffusion += s.diffusion;
        out.scatter_rate += s.scatter_rate;
    }
    return out;
}

double stability_dt_bound(const BeamSet& beams, const CoolingTransition& t,
                          const AtomSpecies& species,
                          const ForceModelParams& params) {
    double bound = std::numeric_limits<double>::infinity();
    const double s_tot = beams.total_saturation();
    if (params.doppler_enabled && s_tot > 0.0) {
        // One step must shift the velocity by well under the gamma/k width
        // of the scattering resonance.
        const double rate_max = 0.5 * t.linewidth * s_tot / (1.0 + s_tot);
        const double f_max = hbar * t.wavenumber() * rate_max;
        const double v_width = t.linewidth / t.wavenumber();
        bound = std::min(bound, 0.1 * species.mass * v_width / f_max);
    }
    if (params.subdoppler_enabled && params.subdoppler_strength > 0.0 && s_tot > 0.0) {
        const double alpha = params.subdoppler_strength * hbar * t.wavenumber() *
                             t.wavenumber();
        const double v_c = params.capture_velocity(beams, t, species);
        // Peak sub-Doppler force is alpha*v_c/2; dt limited so one step
        // changes velocity by at most 0.1 v_c.
        bound = std::min(bound, 0.1 * species.mass * v_c / (0.5 * alpha * v_c));
    }
    return bound;
}

}  // namespace motsim
