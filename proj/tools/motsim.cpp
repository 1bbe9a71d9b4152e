#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "motsim/harness.hpp"

namespace fs = std::filesystem;
using namespace motsim;

namespace {

RunConfig load_config_or_default(const std::string& path) {
    if (path.empty()) return RunConfig{};
    return load_run_config(path);
}

SweepSpec::Param parse_param(const std::string& name) {
    if (name == "detuning") return SweepSpec::Param::Detuning;
    if (name == "intensity") return SweepSpec::Param::Intensity;
    if (name == "bias") return SweepSpec::Param::BiasField;
    if (name == "gmismatch") return SweepSpec::Param::GMismatch;
    throw CLI::ValidationError(
        "--param must be one of detuning|intensity|bias|gmismatch");
}

// Values arrive in display units (MHz, mW/cm^2, G, percent) and are
// converted to SI for the sweep.
double to_si(SweepSpec::Param p, double display) {
    switch (p) {
        case SweepSpec::Param::Detuning: return display * units::mhz_angular;
        case SweepSpec::Param::Intensity: return display * units::mw_per_cm2;
        case SweepSpec::Param::BiasField: return display * units::gauss;
        case SweepSpec::Param::GMismatch: return display / 100.0;
    }
    return display;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 long seed_override, bool full_tof) {
    RunConfig cfg = load_config_or_default(config_path);
    if (seed_override >= 0) cfg.sim.seed = static_cast<std::uint64_t>(seed_override);
    fs::create_directories(out_dir);

    const PointResult result = full_tof ? run_point_tof(cfg) : run_point(cfg);

    // Re-run the evolution to export the trajectory and final snapshot.
    cfg.validate();
    EnsembleState state = init_ensemble(cfg.sim.atom_count, cfg.sim.t_init,
                                        cfg.sim.r_init, cfg.preset.species,
                                        cfg.sim.seed);
    EvolveOptions opt;
    opt.dt = cfg.sim.dt;
    opt.max_time = cfg.sim.max_time;
    opt.window = cfg.sim.window;
    opt.gravity = cfg.sim.gravity;
    const EvolveResult evo =
        evolve_to_equilibrium(state, cfg.force_field(), cfg.preset.species, opt);
    write_snapshot_csv((fs::path(out_dir) / "snapshot.csv").string(), state);
    write_trajectory_csv((fs::path(out_dir) / "trajectory.csv").string(),
                         evo.trajectory);

    KeyValueConfig summary;
    summary.set_double("temperature_uk", result.temperature / units::micro_kelvin);
    summary.set_double("temperature_err_uk",
                       result.temperature_err / units::micro_kelvin);
    summary.set_bool("converged", result.converged);
    summary.set_double("radius_1e_um",
                       result.stats.radius_1e[0] / units::micrometer);
    summary.set_int("config_hash", static_cast<long>(config_hash(cfg)));
    summary.write_file((fs::path(out_dir) / "summary.txt").string());
    config_to_kv(cfg).write_file((fs::path(out_dir) / "config.txt").string());

    std::printf("T = %.3f uK (%s), err %.3f uK\n",
                result.temperature / units::micro_kelvin,
                result.converged ? "converged" : "NOT converged",
                result.temperature_err / units::micro_kelvin);
    return result.converged ? 0 : 1;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              const std::string& param_name, std::vector<double> values,
              int reps, long seed, bool full_tof, bool model_only, int threads,
              std::vector<double> mismatches) {
    const SweepSpec::Param param = parse_param(param_name);
    fs::create_directories(out_dir);
    const RunConfig base = load_config_or_default(config_path);

    if (param == SweepSpec::Param::GMismatch) {
        std::vector<double> frac;
        for (const double m : mismatches.empty() ? values : mismatches)
            frac.push_back(m / 100.0);
        std::vector<double> bias_si;
        for (const double b : values) bias_si.push_back(b * units::gauss);
        const GScenarioReport report = compare_g_scenarios(
            base, frac, mismatches.empty() ? std::vector<double>{} : bias_si,
            static_cast<std::uint64_t>(seed), threads);
        write_g_report((fs::path(out_dir) / "g_report.csv").string(), report);
        for (const GScenario& s : report.scenarios) {
            SweepSpec spec;
            spec.param = SweepSpec::Param::BiasField;
            spec.base = base;
            for (const SweepRow& row : s.sweep.rows) spec.values.push_back(row.value);
            const std::string tag =
                "bias_mismatch_" + format_double(s.mismatch * 100.0);
            write_sweep_csv((fs::path(out_dir) / (tag + ".csv")).string(), spec,
                            s.sweep);
        }
        std::printf("g-mismatch comparison written to %s\n", out_dir.c_str());
        return 0;
    }

    SweepSpec spec;
    spec.param = param;
    spec.base = base;
    for (const double v : values) spec.values.push_back(to_si(param, v));
    spec.repetitions = reps;
    spec.master_seed = static_cast<std::uint64_t>(seed);
    spec.full_tof = full_tof;
    spec.model_only = model_only;
    spec.threads = threads;

    const SweepResult result = run_sweep(spec);
    const std::string stem = SweepSpec::param_name(param);
    write_sweep_csv((fs::path(out_dir) / (stem + "_sweep.csv")).string(), spec,
                    result);
    write_figure_csv((fs::path(out_dir) / (stem + "_figure.csv")).string(), spec,
                     result);
    write_manifest((fs::path(out_dir) / (stem + "_manifest.txt")).string(), spec,
                   result);
    std::printf("%zu points written to %s\n", result.rows.size(), out_dir.c_str());
    return 0;
}

int cmd_tof_fit(const std::string& series_path, const std::string& images_dir,
                const std::string& out_path, const std::string& preset_name) {
    const TransitionPreset preset = transition_preset(preset_name);
    TofSeries series;
    if (!series_path.empty()) {
        series = read_tof_csv(series_path);
    } else {
        std::vector<fs::path> paths;
        for (const auto& entry : fs::directory_iterator(images_dir))
            if (entry.path().extension() == ".pgm") paths.push_back(entry.path());
        std::sort(paths.begin(), paths.end());
        if (paths.empty())
            throw std::runtime_error("tof-fit: no .pgm images in " + images_dir);
        for (const fs::path& p : paths) {
            ImageMeta meta;
            const CloudImage img = read_pgm(p.string(), meta);
            const GaussianFit fit = fit_gaussian(img);
            // Mean of the two image-plane 1/e radii.
            series.push_back(
                {meta.expansion_time, 0.5 * (fit.radius_x + fit.radius_y)});
        }
    }
    const TemperatureFit fit = fit_temperature(series, preset.species);
    if (!out_path.empty()) write_temperature_fit(out_path, fit);
    std::printf("T = %.3f +- %.3f uK, r0 = %.1f um%s\n",
                fit.temperature / units::micro_kelvin,
                fit.temperature_err / units::micro_kelvin,
                fit.radius0 / units::micrometer,
                fit.expanding ? "" : " (slope clamped at zero)");
    return 0;
}

int cmd_limits(const std::string& preset_name, double detuning_mhz) {
    const TransitionPreset p = transition_preset(preset_name);
    const CoolingTransition& t = p.transition;
    std::printf("preset            %s (%s, %.4f nm)\n", preset_name.c_str(),
                p.species.name.c_str(), t.wavelength / units::nanometer);
    std::printf("linewidth         %.4f MHz\n", t.linewidth / units::mhz_angular);
    std::printf("doppler limit     %.3f uK\n",
                doppler_limit(t) / units::micro_kelvin);
    std::printf("doppler T(delta)  %.3f uK at %.2f MHz\n",
                doppler_temperature(detuning_mhz * units::mhz_angular, t) /
                    units::micro_kelvin,
                detuning_mhz);
    std::printf("recoil limit      %.4f uK\n",
                recoil_limit(p.species, t.wavelength) / units::micro_kelvin);
    std::printf("I_sat             %.4f mW/cm^2\n",
                t.saturation_intensity / units::mw_per_cm2);
    const LockingVelocities lock = locking_velocities(1.0 * units::gauss, t);
    std::printf("v_D at 1 G        %.4f m/s\n", lock.doppler);
    std::printf("v_S at 1 G        %.4f m/s\n", lock.subdoppler);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semiclassical Monte Carlo of Doppler and sub-Doppler cooling "
                 "in a six-beam magneto-optical trap"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", param_name = "detuning";
    std::string series_path, images_dir, out_path, preset_name = "Tm410";
    std::vector<double> values, mismatches;
    int reps = 1, threads = 1;
    long seed = -1;
    double detuning_mhz = 10.0;
    bool full_tof = false, model_only = false;

    CLI::App* sim = app.add_subcommand("simulate", "One run to equilibrium");
    sim->add_option("--config", config_path, "Key-value configuration file");
    sim->add_option("--out", out_dir, "Output directory");
    sim->add_option("--seed", seed, "Override sim.seed");
    sim->add_flag("--full-tof", full_tof,
                  "Measure via the imaging pipeline instead of velocities");

    CLI::App* sweep = app.add_subcommand("sweep", "Parameter sweep");
    sweep->add_option("--param", param_name,
                      "detuning|intensity|bias|gmismatch");
    sweep->add_option("--values", values,
                      "Swept values (MHz, mW/cm^2, G, or percent); "
                      "optional for gmismatch")
        ->delimiter(',');
    sweep->add_option("--reps", reps, "Repetitions per point");
    sweep->add_option("--seed", seed, "Master seed");
    sweep->add_option("--config", config_path, "Base configuration file");
    sweep->add_option("--out", out_dir, "Output directory");
    sweep->add_option("--threads", threads, "Worker threads");
    sweep->add_option("--mismatches", mismatches,
                      "gmismatch only: mismatch list in percent "
                      "(--values then gives the bias grid in G)");
    sweep->add_flag("--full-tof", full_tof, "Full imaging chain per point");
    sweep->add_flag("--model-only", model_only,
                    "Closed-form model instead of Monte Carlo");

    CLI::App* tof = app.add_subcommand("tof-fit", "Fit a time-of-flight series");
    tof->add_option("--series", series_path, "dt_ms,radius_um CSV");
    tof->add_option("--images", images_dir, "Directory of .pgm frames");
    tof->add_option("--out", out_path, "Fit result file");
    tof->add_option("--preset", preset_name, "Species preset for the mass");

    CLI::App* limits = app.add_subcommand("limits", "Analytic quantities");
    limits->add_option("--preset", preset_name, "Tm410|Tm530|Cs852");
    limits->add_option("--detuning", detuning_mhz, "Detuning for Eq. T(delta), MHz");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(config_path, out_dir, seed, full_tof);
        if (sweep->parsed())
            return cmd_sweep(config_path, out_dir, param_name, values, reps,
                             seed < 0 ? 1 : seed, full_tof, model_only, threads,
                             mismatches);
        if (tof->parsed()) {
            if (series_path.empty() == images_dir.empty())
                throw std::runtime_error(
                    "tof-fit: provide exactly one of --series or --images");
            return cmd_tof_fit(series_path, images_dir, out_path, preset_name);
        }
        if (limits->parsed()) return cmd_limits(preset_name, detuning_mhz);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
