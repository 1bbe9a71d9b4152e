#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "motsim/harness.hpp"

using namespace motsim;
using namespace motsim::constants;
using doctest::Approx;

namespace {

RunConfig tiny_config() {
    RunConfig cfg;
    cfg.sim.atom_count = 32;
    cfg.sim.max_time = 2e-3;
    cfg.sim.window = 0.5e-3;
    cfg.sim.t_init = 100e-6;
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("run config round trips through the key-value form") {
    RunConfig cfg;
    cfg.detuning = 14.0 * units::mhz_angular;
    cfg.total_saturation = 0.8;
    cfg.field.axial_gradient = 15.0 * units::gauss_per_cm;
    cfg.field.bias = {1e-4, 0, 2e-4};
    cfg.forces.subdoppler_strength = 3.0;
    cfg.sim.atom_count = 99;
    cfg.sim.seed = 77;
    cfg.camera.shot_noise = true;
    cfg.probe.exposure = 150e-6;

    const KeyValueConfig kv = config_to_kv(cfg);
    const RunConfig back = config_from_kv(kv);
    CHECK(config_to_kv(back).serialize() == kv.serialize());
    CHECK(config_hash(back) == config_hash(cfg));
    CHECK(back.detuning == Approx(cfg.detuning).epsilon(1e-14));
    CHECK(back.total_saturation == Approx(0.8));
    CHECK(back.field.bias[2] == Approx(2e-4).epsilon(1e-14));
    CHECK(back.forces.subdoppler_strength == 3.0);
    CHECK(back.sim.atom_count == 99);
    CHECK(back.camera.shot_noise);

    // Changing any parameter changes the hash.
    RunConfig other = cfg;
    other.detuning = 15.0 * units::mhz_angular;
    CHECK(config_hash(other) != config_hash(cfg));
}

TEST_CASE("config overrides apply on top of the defaults") {
    const auto kv = KeyValueConfig::parse_string(
        "beams.detuning_mhz = 20\n"
        "beams.s_total = 1.2\n"
        "field.bias_g = 0 0 2.5\n"
        "sim.atoms = 128\n"
        "sim.gravity = false\n");
    const RunConfig cfg = config_from_kv(kv);
    CHECK(cfg.detuning == Approx(20.0 * units::mhz_angular));
    CHECK(cfg.total_saturation == Approx(1.2));
    CHECK(cfg.field.bias[2] == Approx(2.5 * units::gauss));
    CHECK(cfg.sim.atom_count == 128);
    CHECK_FALSE(cfg.sim.gravity);
    // Untouched parameters keep their defaults.
    CHECK(cfg.field.axial_gradient == Approx(20.0 * units::gauss_per_cm));
    CHECK(cfg.sim.dt == Approx(1e-6));
}

TEST_CASE("validation rejects unstable or unphysical configurations") {
    RunConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    SUBCASE("time step beyond the stability bound") {
        cfg.sim.dt = 1e-3;
        CHECK_THROWS_AS(cfg.validate(), std::runtime_error);
    }
    SUBCASE("non-positive detuning") {
        cfg.detuning = 0.0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("no atoms") {
        cfg.sim.atom_count = 0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
}

TEST_CASE("model-only detuning sweep equals the closed forms") {
    SweepSpec spec;
    spec.param = SweepSpec::Param::Detuning;
    spec.model_only = true;
    for (const double mhz : {5.0, 10.0, 20.0, 30.0})
        spec.values.push_back(mhz * units::mhz_angular);
    const SweepResult res = run_sweep(spec);
    REQUIRE(res.rows.size() == 4);
    const CoolingTransition t = spec.base.preset.transition;
    const ForceModelParams& f = spec.base.forces;
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const SweepRow& row = res.rows[i];
        CHECK(row.value == spec.values[i]);
        CHECK(row.converged);
        CHECK(row.eq1_doppler ==
              Approx(doppler_temperature(row.value, t)).epsilon(1e-12));
        const double eq3 = f.temperature_constant * hbar * t.linewidth *
                               t.linewidth * spec.base.total_saturation /
                               (8.0 * t.f_lower * row.value * k_boltzmann) +
                           f.heating_offset;
        CHECK(row.eq3_subdoppler == Approx(eq3).epsilon(1e-12));
        // Model mode reports the sub-Doppler curve as the temperature.
        CHECK(row.t_mean == Approx(eq3).epsilon(1e-12));
    }
    // Eq. 3 decreases with the detuning magnitude.
    CHECK(res.rows.front().t_mean > res.rows.back().t_mean);
}

TEST_CASE("model-only intensity sweep fits a clean line") {
    SweepSpec spec;
    spec.param = SweepSpec::Param::Intensity;
    spec.model_only = true;
    for (const double mw : {2.0, 4.0, 7.2, 12.0, 18.0})
        spec.values.push_back(mw * units::mw_per_cm2);
    const SweepResult res = run_sweep(spec);
    CHECK(res.intensity_fit.r_squared == Approx(1.0).epsilon(1e-9));
    CHECK(res.intensity_fit.slope > 0.0);
    CHECK(res.intensity_fit.intercept ==
          Approx(spec.base.forces.heating_offset).epsilon(1e-9));
    // Eq. 3 in intensity form: T - T0 is linear through the origin.
    const double t1 = res.rows[0].t_mean - spec.base.forces.heating_offset;
    const double t2 = res.rows[3].t_mean - spec.base.forces.heating_offset;
    CHECK(t2 / t1 == Approx(6.0).epsilon(1e-9));
}

TEST_CASE("monte carlo sweeps are deterministic across thread counts") {
    SweepSpec spec;
    spec.param = SweepSpec::Param::Detuning;
    spec.base = tiny_config();
    spec.values = {10.0 * units::mhz_angular, 20.0 * units::mhz_angular};
    spec.repetitions = 2;
    spec.master_seed = 5;
    spec.threads = 1;
    const SweepResult serial = run_sweep(spec);
    spec.threads = 4;
    const SweepResult parallel = run_sweep(spec);
    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        CHECK(serial.rows[i].t_mean == parallel.rows[i].t_mean);
        CHECK(serial.rows[i].t_stderr == parallel.rows[i].t_stderr);
        CHECK(serial.rows[i].seed == parallel.rows[i].seed);
    }
    // Repetitions yield a sampled standard error.
    CHECK(serial.rows[0].t_stderr > 0.0);
    // A different master seed changes the result.
    spec.master_seed = 6;
    const SweepResult reseeded = run_sweep(spec);
    CHECK(reseeded.rows[0].t_mean != serial.rows[0].t_mean);
}

TEST_CASE("sweep CSV and manifest files") {
    SweepSpec spec;
    spec.param = SweepSpec::Param::Detuning;
    spec.model_only = true;
    spec.values = {10.0 * units::mhz_angular, 20.0 * units::mhz_angular};
    const SweepResult res = run_sweep(spec);

    const std::string csv = "test_sweep_rows.csv";
    write_sweep_csv(csv, spec, res);
    const std::string text = slurp(csv);
    CHECK(text.rfind("value,unit,t_mean_uk,t_stderr_uk,converged,", 0) == 0);
    CHECK(text.find("MHz") != std::string::npos);
    std::remove(csv.c_str());

    const std::string fig = "test_sweep_fig.csv";
    write_figure_csv(fig, spec, res);
    CHECK(slurp(fig).rfind("x,y,yerr,eq1_doppler,eq3_subdoppler", 0) == 0);
    std::remove(fig.c_str());

    const std::string manifest = "test_sweep_manifest.txt";
    write_manifest(manifest, spec, res);
    const auto kv = KeyValueConfig::parse_file(manifest);
    CHECK(kv.get("version") == "motsim 1.0.0");
    CHECK(kv.get("param") == "detuning");
    CHECK(kv.get_vector("values").size() == 2);
    CHECK(kv.get("unit") == "MHz");
    CHECK(kv.has("config.beams.detuning_mhz"));
    CHECK(kv.get("config_hash") == std::to_string(res.config_hash));
    std::remove(manifest.c_str());
}

TEST_CASE("suppression field interpolation") {
    auto row = [](double gauss, double t_uk) {
        SweepRow r;
        r.value = gauss * units::gauss;
        r.t_mean = t_uk * units::micro_kelvin;
        return r;
    };
    SUBCASE("midpoint crossing between grid points") {
        // T(0)=20, plateau 220 -> midpoint 120 uK, crossed between 1 and 2 G.
        const std::vector<SweepRow> rows = {row(0, 20), row(1, 70), row(2, 170),
                                            row(4, 210)};
        const double b = suppression_field(rows, 220e-6);
        CHECK(b == Approx(1.5 * units::gauss).epsilon(1e-9));
    }
    SUBCASE("never crossing gives NaN") {
        const std::vector<SweepRow> rows = {row(0, 20), row(1, 22), row(2, 25)};
        CHECK(std::isnan(suppression_field(rows, 220e-6)));
    }
}

TEST_CASE("display values and units") {
    SweepSpec spec;
    CHECK(std::string(SweepSpec::param_name(SweepSpec::Param::Detuning)) ==
          "detuning");
    CHECK(std::string(SweepSpec::value_unit(SweepSpec::Param::Detuning)) == "MHz");
    CHECK(std::string(SweepSpec::value_unit(SweepSpec::Param::Intensity)) ==
          "mW/cm2");
    CHECK(std::string(SweepSpec::value_unit(SweepSpec::Param::BiasField)) == "G");
    spec.param = SweepSpec::Param::Detuning;
    CHECK(spec.display_value(10.0 * units::mhz_angular) == Approx(10.0));
    spec.param = SweepSpec::Param::Intensity;
    CHECK(spec.display_value(7.2 * units::mw_per_cm2) == Approx(7.2));
    spec.param = SweepSpec::Param::BiasField;
    CHECK(spec.display_value(2.0 * units::gauss) == Approx(2.0));
    spec.param = SweepSpec::Param::GMismatch;
    CHECK(spec.display_value(0.02) == Approx(2.0));
}

TEST_CASE("sweep input validation") {
    SweepSpec spec;
    spec.model_only = true;
    spec.values = {10.0 * units::mhz_angular};
    CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
    spec.values = {10.0 * units::mhz_angular, -1.0};
    CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
    spec.param = SweepSpec::Param::GMismatch;
    spec.values = {0.0, 0.02};
    CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
}
