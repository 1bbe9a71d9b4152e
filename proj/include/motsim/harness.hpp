#ifndef MOTSIM_HARNESS_HPP_
#define MOTSIM_HARNESS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "motsim/atomkit.hpp"
#include "motsim/config.hpp"
#include "motsim/fieldgeom.hpp"
#include "motsim/forces.hpp"
#include "motsim/langevin.hpp"
#include "motsim/thermometry.hpp"

namespace motsim {

struct SimParams {
    std::size_t atom_count = 4096;
    double dt = 1e-6;          // s
    double t_init = 240e-6;    // K
    double r_init = 80e-6;     // m
    double max_time = 30e-3;   // s
    double window = 2e-3;      // s
    bool gravity = true;
    std::uint64_t seed = 1;
};

struct ProbeParams {
    double intensity = 100.0 * units::mw_per_cm2;  // W/m^2
    double exposure = 200e-6;                      // s
};

// Complete description of one simulation run; round-trips through the
// key-value configuration file.
struct RunConfig {
    TransitionPreset preset = transition_preset("Tm410");
    double detuning = 10.0 * units::mhz_angular;  // red magnitude, rad/s
    double total_saturation = 0.4;                // S at trap center
    FieldConfig field{20.0 * units::gauss_per_cm, {0, 0, 0}};
    ForceModelParams forces;
    SimParams sim;
    CameraGeometry camera;
    ProbeParams probe;

    // Per-beam s is S/6: S is the total saturation at trap center.
    BeamSet beams() const {
        return standard_mot_beams(detuning, total_saturation / 6.0);
    }
    MotForceField force_field() const {
        return {beams(), field, preset.transition, preset.species, forces};
    }
    void validate() const;
};

RunConfig config_from_kv(const KeyValueConfig& kv);
KeyValueConfig config_to_kv(const RunConfig& cfg);
RunConfig load_run_config(const std::string& path);
std::uint64_t config_hash(const RunConfig& cfg);

// One equilibrium temperature measurement.
struct PointResult {
    double temperature = 0.0;      // K
    double temperature_err = 0.0;  // K
    bool converged = false;
    CloudStats stats;
};

// Fast kinetic estimator (windowed velocity variance).
PointResult run_point(const RunConfig& cfg);
// Complete measurement chain: equilibrate, expand over the standard
// time-of-flight grid, render, fit.
PointResult run_point_tof(const RunConfig& cfg);

struct SweepSpec {
    enum class Param { Detuning, Intensity, BiasField, GMismatch };
    Param param = Param::Detuning;
    std::vector<double> values;  // SI: rad/s, W/m^2, T, or mismatch fraction
    RunConfig base;
    int repetitions = 1;
    std::uint64_t master_seed = 1;
    bool full_tof = false;
    bool model_only = false;  // closed-form model instead of Monte Carlo
    int threads = 1;
    // Bias sweeps apply the field along this direction (unit vector).
    Vec3 bias_direction{0.57735026918962576, 0.57735026918962576,
                        0.57735026918962576};

    static const char* param_name(Param p);
    static const char* value_unit(Param p);
    double display_value(double value) const;  // MHz, mW/cm^2, G, percent
};

struct SweepRow {
    double value = 0.0;  // swept value, SI
    double t_mean = 0.0;
    double t_stderr = 0.0;
    bool converged = false;
    double eq1_doppler = 0.0;     // Doppler-theory overlay, K
    double eq3_subdoppler = 0.0;  // sub-Doppler model overlay, K
    std::uint64_t seed = 0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

struct SweepResult {
    SweepSpec::Param param = SweepSpec::Param::Detuning;
    std::vector<SweepRow> rows;
    std::uint64_t config_hash = 0;
    // Intensity sweeps: weighted linear fit T = a*I + b (a per W/m^2).
    LinearFit intensity_fit;
    // Bias sweeps: Doppler-only reference and half-suppression field.
    double doppler_plateau = 0.0;  // K
    double b_half = 0.0;           // T; NaN when never crossed
};

SweepResult sweep_detuning(const SweepSpec& spec);
SweepResult sweep_intensity(const SweepSpec& spec);
SweepResult sweep_bias_field(const SweepSpec& spec);
SweepResult run_sweep(const SweepSpec& spec);  // dispatch on spec.param

// Half-suppression field from a bias sweep: first crossing of the
// midpoint between T(0) and the Doppler-only plateau.
double suppression_field(const std::vector<SweepRow>& rows, double plateau);

struct GScenario {
    double mismatch = 0.0;  // relative g-factor difference
    SweepResult sweep;
    double b_half = 0.0;
};

struct GScenarioReport {
    std::vector<GScenario> scenarios;
    bool ordering_inverse_in_mismatch = false;
    double tm530_doppler_limit = 0.0;  // K, from the 530.7 nm preset
};

// Bias-inhibition comparison across g-factor mismatches (default
// {0, 0.8%, 2%, 30%}); B-half must shrink as the mismatch grows.
GScenarioReport compare_g_scenarios(const RunConfig& base,
                                    std::vector<double> mismatches = {},
                                    std::vector<double> bias_fields = {},
                                    std::uint64_t master_seed = 1,
                                    int threads = 1);

void write_sweep_csv(const std::string& path, const SweepSpec& spec,
                     const SweepResult& result);
void write_figure_csv(const std::string& path, const SweepSpec& spec,
                      const SweepResult& result);
void write_manifest(const std::string& path, const SweepSpec& spec,
                    const SweepResult& result);
void write_g_report(const std::string& path, const GScenarioReport& report);

}  // namespace motsim

#endif
