#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "motsim/atomkit.hpp"

using namespace motsim;
using namespace motsim::constants;
using doctest::Approx;

namespace {

CoolingTransition tm410() { return transition_preset("Tm410").transition; }

}  // namespace

TEST_CASE("doppler limit anchors") {
    // hbar * 2pi*10 MHz / (2 kB) = 239.96 uK.
    CHECK(doppler_limit(tm410()) == Approx(239.96e-6).epsilon(1e-4));
    // The Cs852 and Tm530 presets encode the 120 uK and 8 uK limits.
    CHECK(doppler_limit(transition_preset("Cs852").transition) ==
          Approx(120e-6).epsilon(1e-12));
    CHECK(doppler_limit(transition_preset("Tm530").transition) ==
          Approx(8e-6).epsilon(1e-12));
}

TEST_CASE("doppler temperature curve") {
    const CoolingTransition t = tm410();
    const double g = t.linewidth;
    // Minimum at delta = gamma/2 equals the Doppler limit exactly.
    CHECK(doppler_temperature(0.5 * g, t) == Approx(doppler_limit(t)).epsilon(1e-14));
    // Ratio at delta = gamma is 1.25 (Eq. 1).
    CHECK(doppler_temperature(g, t) / doppler_temperature(0.5 * g, t) ==
          Approx(1.25).epsilon(1e-12));
    // gamma/2 is the minimum over detuning.
    CHECK(doppler_temperature(0.4 * g, t) > doppler_temperature(0.5 * g, t));
    CHECK(doppler_temperature(0.6 * g, t) > doppler_temperature(0.5 * g, t));
    // Scale covariance: doubling gamma and delta together doubles T.
    CoolingTransition wide = t;
    wide.linewidth = 2.0 * g;
    CHECK(doppler_temperature(2.0 * 0.7 * g, wide) ==
          Approx(2.0 * doppler_temperature(0.7 * g, t)).epsilon(1e-12));
    CHECK_THROWS_AS(doppler_temperature(0.0, t), std::invalid_argument);
    CHECK_THROWS_AS(doppler_temperature(-g, t), std::invalid_argument);
}

TEST_CASE("recoil limits") {
    // Cs at 852.3 nm: 99.2 nK, within 5% of the often-quoted 100 nK.
    const double t_cs = recoil_limit(cesium(), 852.3e-9);
    CHECK(t_cs == Approx(99.2e-9).epsilon(2e-3));
    CHECK(std::abs(t_cs - 100e-9) / 100e-9 < 0.05);
    // Tm at 410.6 nm: 0.336 uK.
    CHECK(recoil_limit(thulium(), 410.6e-9) == Approx(0.336e-6).epsilon(2e-3));
    CHECK_THROWS_AS(recoil_limit(thulium(), 0.0), std::invalid_argument);
}

TEST_CASE("saturation parameter") {
    const CoolingTransition t = tm410();  // I_sat = 18 mW/cm^2
    CHECK(saturation_parameter(36.0 * units::mw_per_cm2, t) == Approx(2.0));
    CHECK(saturation_parameter(7.2 * units::mw_per_cm2, t) == Approx(0.4));
    CHECK(saturation_parameter(0.0, t) == 0.0);
    CHECK_THROWS_AS(saturation_parameter(-1.0, t), std::invalid_argument);
}

TEST_CASE("locking velocities") {
    CoolingTransition t = tm410();
    SUBCASE("unit g-factors at 1 G give |v| near 0.575 m/s") {
        t.g_lower = 1.0;
        t.g_upper = 1.0;
        const auto lock = locking_velocities(1e-4, t);
        CHECK(lock.doppler == Approx(-0.5747).epsilon(2e-3));
        CHECK(lock.subdoppler == Approx(lock.doppler).epsilon(1e-14));
    }
    SUBCASE("2% g mismatch separates the zeros by 2%") {
        const auto lock = locking_velocities(1e-4, t);
        CHECK(lock.doppler / lock.subdoppler == Approx(0.98).epsilon(1e-12));
        CHECK(std::abs(lock.doppler - lock.subdoppler) ==
              Approx(0.02 * std::abs(lock.subdoppler)).epsilon(1e-9));
    }
    SUBCASE("odd and linear in B") {
        const auto a = locking_velocities(1e-4, t);
        const auto b = locking_velocities(-1e-4, t);
        const auto c = locking_velocities(3e-4, t);
        CHECK(a.doppler == Approx(-b.doppler).epsilon(1e-14));
        CHECK(a.subdoppler == Approx(-b.subdoppler).epsilon(1e-14));
        CHECK(c.doppler == Approx(3.0 * a.doppler).epsilon(1e-14));
        const auto zero = locking_velocities(0.0, t);
        CHECK(zero.doppler == 0.0);
        CHECK(zero.subdoppler == 0.0);
    }
}

TEST_CASE("phase space density") {
    // 10^12 cm^-3 at 25 uK for Tm: 1.94e-5.
    const double psd = phase_space_density(1e18, 25e-6, thulium());
    CHECK(psd == Approx(1.94e-5).epsilon(5e-3));
    CHECK(psd > 0.5e-5);
    CHECK(psd < 4e-5);
    // n lambda^3 scalings: linear in n, T^{-3/2}.
    CHECK(phase_space_density(2e18, 25e-6, thulium()) == Approx(2.0 * psd));
    CHECK(phase_space_density(1e18, 100e-6, thulium()) == Approx(psd / 8.0));
    CHECK_THROWS_AS(phase_space_density(0.0, 25e-6, thulium()),
                    std::invalid_argument);
    CHECK_THROWS_AS(phase_space_density(1e18, 0.0, thulium()),
                    std::invalid_argument);
}

TEST_CASE("presets") {
    const TransitionPreset p = transition_preset("Tm410");
    CHECK(p.species.name == "Tm");
    CHECK(p.species.mass == Approx(168.934 * atomic_mass_unit));
    CHECK(p.transition.wavelength == Approx(410.6e-9));
    CHECK(p.transition.linewidth == Approx(10.0 * units::mhz_angular));
    CHECK(p.transition.g_lower == Approx(1.141));
    CHECK(p.transition.g_upper == Approx(1.141 * 0.98));
    CHECK(p.transition.f_lower == 4.0);
    CHECK(p.transition.f_upper == 5.0);
    CHECK(p.transition.saturation_intensity == Approx(18.0 * units::mw_per_cm2));
    CHECK_NOTHROW(p.transition.validate());

    const TransitionPreset cs = transition_preset("Cs852");
    CHECK(cs.species.mass == Approx(132.905 * atomic_mass_unit));
    CHECK(cs.transition.saturation_intensity == Approx(1.1 * units::mw_per_cm2));

    const TransitionPreset tm530 = transition_preset("Tm530");
    // 0.8% g mismatch on the 530.7 nm line.
    CHECK(1.0 - tm530.transition.g_upper / tm530.transition.g_lower ==
          Approx(0.008).epsilon(1e-9));

    CHECK_THROWS_AS(transition_preset("Na589"), std::invalid_argument);
}

TEST_CASE("validation") {
    CoolingTransition t = tm410();
    t.f_upper = t.f_lower;  // F -> F is not the closed cooling scheme
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    t = tm410();
    t.linewidth = 0.0;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    CHECK_THROWS_AS(doppler_limit(t), std::invalid_argument);
    AtomSpecies s{"X", -1.0};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("preset round trip through key-value config") {
    const TransitionPreset p = transition_preset("Tm530");
    KeyValueConfig kv;
    store_transition_preset(p, kv);
    const TransitionPreset back = load_transition_preset(kv);
    CHECK(back.species.name == p.species.name);
    CHECK(back.species.mass == Approx(p.species.mass).epsilon(1e-15));
    CHECK(back.transition.wavelength == Approx(p.transition.wavelength).epsilon(1e-15));
    CHECK(back.transition.linewidth == Approx(p.transition.linewidth).epsilon(1e-15));
    CHECK(back.transition.g_lower == p.transition.g_lower);
    CHECK(back.transition.g_upper == p.transition.g_upper);
    CHECK(back.transition.saturation_intensity ==
          Approx(p.transition.saturation_intensity).epsilon(1e-15));
}

TEST_CASE("config overrides on top of a preset") {
    const auto kv = KeyValueConfig::parse_string(
        "transition.preset = Tm410\n"
        "transition.linewidth_mhz = 5\n"
        "transition.g_upper = 1.0\n");
    const TransitionPreset p = load_transition_preset(kv);
    CHECK(p.transition.linewidth == Approx(5.0 * units::mhz_angular));
    CHECK(doppler_limit(p.transition) == Approx(119.98e-6).epsilon(1e-4));
    CHECK(p.transition.g_upper == 1.0);
    CHECK(p.transition.g_lower == Approx(1.141));  // untouched preset value
    CHECK(p.transition.wavelength == Approx(410.6e-9));
}
