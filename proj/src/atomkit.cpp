#include "motsim/atomkit.hpp"

#include <cmath>
#include <stdexcept>

namespace motsim {

namespace {

using namespace motsim::constants;

constexpr double kThuliumMassU = 168.934;
constexpr double kCesiumMassU = 132.905;

// The paper quantifies only the relative g-factor difference of the
// cooling levels (2% at 410.6 nm, 0.8% at 530.7 nm); the ground-state
// value is the free-atom g_J of Tm.
constexpr double kThuliumGLower = 1.141;

double linewidth_from_doppler_limit(double t_doppler) {
    return 2.0 * k_boltzmann * t_doppler / hbar;
}

// Two-level saturation intensity pi*h*c*gamma / (3 lambda^3),
// gamma in rad/s.
double two_level_isat(double wavelength, double linewidth) {
    return pi * h_planck * speed_of_light * linewidth /
           (3.0 * wavelength * wavelength * wavelength);
}

}  // namespace

void AtomSpecies::validate() const {
    if (!(mass > 0.0)) throw std::invalid_argument("AtomSpecies: mass must be > 0");
}

void CoolingTransition::validate() const {
    if (!(wavelength > 0.0))
        throw std::invalid_argument("CoolingTransition: wavelength must be > 0");
    if (!(linewidth > 0.0))
        throw std::invalid_argument("CoolingTransition: linewidth must be > 0");
    if (!(saturation_intensity > 0.0))
        throw std::invalid_argument("CoolingTransition: I_sat must be > 0");
    if (f_upper != f_lower + 1.0)
        throw std::invalid_argument("CoolingTransition: expected F -> F+1 scheme");
}

AtomSpecies thulium() { return {"Tm", kThuliumMassU * atomic_mass_unit}; }
AtomSpecies cesium() { return {"Cs", kCesiumMassU * atomic_mass_unit}; }

TransitionPreset transition_preset(const std::string& name) {
    if (name == "Tm410") {
        CoolingTransition t;
        t.wavelength = 410.6e-9;
        t.linewidth = 10.0 * units::mhz_angular;
        t.g_lower = kThuliumGLower;
        t.g_upper = kThuliumGLower * (1.0 - 0.02);
        t.f_lower = 4.0;
        t.f_upper = 5.0;
        t.saturation_intensity = 18.0 * units::mw_per_cm2;
        return {thulium(), t};
    }
    if (name == "Tm530") {
        CoolingTransition t;
        t.wavelength = 530.7e-9;
        // Linewidth chosen to give the 8 uK Doppler limit of this line.
        t.linewidth = linewidth_from_doppler_limit(8e-6);
        t.g_lower = kThuliumGLower;
        t.g_upper = kThuliumGLower * (1.0 - 0.008);
        t.f_lower = 4.0;
        t.f_upper = 5.0;
        t.saturation_intensity = two_level_isat(530.7e-9, linewidth_from_doppler_limit(8e-6));
        return {thulium(), t};
    }
    if (name == "Cs852") {
        CoolingTransition t;
        t.wavelength = 852.3e-9;
        // Linewidth from the 120 uK Doppler limit of the Cs D2 line.
        t.linewidth = linewidth_from_doppler_limit(120e-6);
        t.g_lower = 0.25;   // 6s F=4
        t.g_upper = 0.40;   // 6p F'=5
        t.f_lower = 4.0;
        t.f_upper = 5.0;
        t.saturation_intensity = 1.1 * units::mw_per_cm2;
        return {cesium(), t};
    }
    throw std::invalid_argument("unknown transition preset: " + name);
}

TransitionPreset load_transition_preset(const KeyValueConfig& cfg) {
    TransitionPreset p = transition_preset(cfg.get("transition.preset", "Tm410"));
    if (cfg.has("species.name")) p.species.name = cfg.get("species.name");
    if (cfg.has("species.mass_u"))
        p.species.mass = cfg.get_double("species.mass_u") * atomic_mass_unit;
    CoolingTransition& t = p.transition;
    t.wavelength = cfg.get_double("transition.wavelength_nm",
                                  t.wavelength / units::nanometer) * units::nanometer;
    t.linewidth = cfg.get_double("transition.linewidth_mhz",
                                 t.linewidth / units::mhz_angular) * units::mhz_angular;
    t.g_lower = cfg.get_double("transition.g_lower", t.g_lower);
    t.g_upper = cfg.get_double("transition.g_upper", t.g_upper);
    t.f_lower = cfg.get_double("transition.f_lower", t.f_lower);
    t.f_upper = cfg.get_double("transition.f_upper", t.f_upper);
    t.saturation_intensity =
        cfg.get_double("transition.isat_mw_cm2",
                       t.saturation_intensity / units::mw_per_cm2) * units::mw_per_cm2;
    p.species.validate();
    t.validate();
    return p;
}

void store_transition_preset(const TransitionPreset& p, KeyValueConfig& cfg) {
    cfg.set("species.name", p.species.name);
    cfg.set_double("species.mass_u", p.species.mass / atomic_mass_unit);
    const CoolingTransition& t = p.transition;
    cfg.set_double("transition.wavelength_nm", t.wavelength / units::nanometer);
    cfg.set_double("transition.linewidth_mhz", t.linewidth / units::mhz_angular);
    cfg.set_double("transition.g_lower", t.g_lower);
    cfg.set_double("transition.g_upper", t.g_upper);
    cfg.set_double("transition.f_lower", t.f_lower);
    cfg.set_double("transition.f_upper", t.f_upper);
    cfg.set_double("transition.isat_mw_cm2",
                   t.saturation_intensity / units::mw_per_cm2);
}

double doppler_limit(const CoolingTransition& t) {
    if (!(t.linewidth > 0.0))
        throw std::invalid_argument("doppler_limit: linewidth must be > 0");
    return hbar * t.linewidth / (2.0 * k_boltzmann);
}

double doppler_temperature(double detuning, const CoolingTransition& t) {
    if (!(detuning > 0.0))
        throw std::invalid_argument("doppler_temperature: red detuning must be > 0");
    const double g = t.linewidth;
    return doppler_limit(t) * (detuning * detuning + g * g / 4.0) / (g * detuning);
}

double recoil_limit(const AtomSpecies& species, double wavelength) {
    if (!(wavelength > 0.0))
        throw std::invalid_argument("recoil_limit: wavelength must be > 0");
    species.validate();
    return h_planck * h_planck /
           (2.0 * wavelength * wavelength * species.mass * k_boltzmann);
}

double saturation_parameter(double intensity, const CoolingTransition& t) {
    if (intensity < 0.0)
        throw std::invalid_argument("saturation_parameter: negative intensity");
    return intensity / t.saturation_intensity;
}

LockingVelocities locking_velocities(double field, const CoolingTransition& t) {
    const double scale = mu_bohr * field / (hbar * t.wavenumber());
    return {-t.g_upper * scale, -t.g_lower * scale};
}

double phase_space_density(double density, double temperature,
                           const AtomSpecies& species) {
    if (!(density > 0.0) || !(temperature > 0.0))
        throw std::invalid_argument("phase_space_density: n and T must be > 0");
    const double lambda_db =
        h_planck / std::sqrt(two_pi * species.mass * k_boltzmann * temperature);
    return density * lambda_db * lambda_db * lambda_db;
}

}  // namespace motsim
