#include "motsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

namespace motsim {

namespace {

using namespace motsim::constants;

constexpr const char* kVersion = "motsim 1.0.0";

double axis_temperature_spread(const CloudStats& s) {
    const double m = s.temperature;
    double var = 0.0;
    for (int j = 0; j < 3; ++j) {
        const double d = s.temperature_axis[j] - m;
        var += d * d;
    }
    return std::sqrt(var / 2.0) / std::sqrt(3.0);
}

}  // namespace

void RunConfig::validate() const {
    preset.species.validate();
    preset.transition.validate();
    if (!(detuning > 0.0))
        throw std::invalid_argument("RunConfig: red detuning must be > 0");
    if (total_saturation < 0.0)
        throw std::invalid_argument("RunConfig: S must be >= 0");
    forces.validate();
    beams().validate();
    if (!(sim.dt > 0.0)) throw std::invalid_argument("RunConfig: dt must be > 0");
    if (sim.atom_count < 1)
        throw std::invalid_argument("RunConfig: atom count must be >= 1");
    if (!(sim.r_init > 0.0))
        throw std::invalid_argument("RunConfig: r_init must be > 0");
    if (sim.t_init < 0.0)
        throw std::invalid_argument("RunConfig: t_init must be >= 0");
    const double bound =
        stability_dt_bound(beams(), preset.transition, preset.species, forces);
    if (sim.dt > bound) {
        throw std::runtime_error("configuration error: dt = " +
                                 format_double(sim.dt) +
                                 " s exceeds the stability bound " +
                                 format_double(bound) + " s");
    }
}

RunConfig config_from_kv(const KeyValueConfig& kv) {
    RunConfig cfg;
    cfg.preset = load_transition_preset(kv);
    cfg.detuning = kv.get_double("beams.detuning_mhz",
                                 cfg.detuning / units::mhz_angular) *
                   units::mhz_angular;
    cfg.total_saturation = kv.get_double("beams.s_total", cfg.total_saturation);

    cfg.field.axial_gradient =
        kv.get_double("field.gradient_g_cm",
                      cfg.field.axial_gradient / units::gauss_per_cm) *
        units::gauss_per_cm;
    if (kv.has("field.bias_g")) {
        const auto b = kv.get_vector("field.bias_g");
        if (b.size() != 3)
            throw std::runtime_error("field.bias_g: expected 3 components");
        for (int j = 0; j < 3; ++j) cfg.field.bias[j] = b[j] * units::gauss;
    }

    cfg.forces.subdoppler_strength =
        kv.get_double("forces.subdoppler_strength", cfg.forces.subdoppler_strength);
    cfg.forces.subdoppler_capture =
        kv.get_double("forces.capture_m_s", cfg.forces.subdoppler_capture);
    cfg.forces.temperature_constant =
        kv.get_double("forces.temperature_constant", cfg.forces.temperature_constant);
    cfg.forces.heating_offset =
        kv.get_double("forces.heating_offset_uk",
                      cfg.forces.heating_offset / units::micro_kelvin) *
        units::micro_kelvin;
    cfg.forces.doppler_enabled = kv.get_bool("forces.doppler", true);
    cfg.forces.subdoppler_enabled = kv.get_bool("forces.subdoppler", true);

    cfg.sim.atom_count = static_cast<std::size_t>(
        kv.get_int("sim.atoms", static_cast<long>(cfg.sim.atom_count)));
    cfg.sim.dt = kv.get_double("sim.dt_us", cfg.sim.dt / units::microsecond) *
                 units::microsecond;
    cfg.sim.t_init = kv.get_double("sim.t_init_uk",
                                   cfg.sim.t_init / units::micro_kelvin) *
                     units::micro_kelvin;
    cfg.sim.r_init = kv.get_double("sim.r_init_um",
                                   cfg.sim.r_init / units::micrometer) *
                     units::micrometer;
    cfg.sim.max_time = kv.get_double("sim.max_time_ms",
                                     cfg.sim.max_time / units::millisecond) *
                       units::millisecond;
    cfg.sim.window = kv.get_double("sim.window_ms",
                                   cfg.sim.window / units::millisecond) *
                     units::millisecond;
    cfg.sim.gravity = kv.get_bool("sim.gravity", cfg.sim.gravity);
    cfg.sim.seed = static_cast<std::uint64_t>(
        kv.get_int("sim.seed", static_cast<long>(cfg.sim.seed)));

    cfg.camera.width = static_cast<int>(kv.get_int("camera.width", cfg.camera.width));
    cfg.camera.height =
        static_cast<int>(kv.get_int("camera.height", cfg.camera.height));
    cfg.camera.pixel_pitch =
        kv.get_double("camera.pitch_um", cfg.camera.pixel_pitch / units::micrometer) *
        units::micrometer;
    const double angle = kv.get_double("camera.angle_deg", 45.0) * pi / 180.0;
    cfg.camera.observation_dir = {std::cos(angle), std::sin(angle), 0.0};
    cfg.camera.shot_noise = kv.get_bool("camera.shot_noise", cfg.camera.shot_noise);

    cfg.probe.intensity = kv.get_double("probe.intensity_mw_cm2",
                                        cfg.probe.intensity / units::mw_per_cm2) *
                          units::mw_per_cm2;
    cfg.probe.exposure = kv.get_double("probe.exposure_us",
                                       cfg.probe.exposure / units::microsecond) *
                         units::microsecond;
    return cfg;
}

KeyValueConfig config_to_kv(const RunConfig& cfg) {
    KeyValueConfig kv;
    store_transition_preset(cfg.preset, kv);
    kv.set_double("beams.detuning_mhz", cfg.detuning / units::mhz_angular);
    kv.set_double("beams.s_total", cfg.total_saturation);
    kv.set_double("field.gradient_g_cm",
                  cfg.field.axial_gradient / units::gauss_per_cm);
    kv.set("field.bias_g", format_double(cfg.field.bias[0] / units::gauss) + " " +
                               format_double(cfg.field.bias[1] / units::gauss) + " " +
                               format_double(cfg.field.bias[2] / units::gauss));
    kv.set_double("forces.subdoppler_strength", cfg.forces.subdoppler_strength);
    kv.set_double("forces.capture_m_s", cfg.forces.subdoppler_capture);
    kv.set_double("forces.temperature_constant", cfg.forces.temperature_constant);
    kv.set_double("forces.heating_offset_uk",
                  cfg.forces.heating_offset / units::micro_kelvin);
    kv.set_bool("forces.doppler", cfg.forces.doppler_enabled);
    kv.set_bool("forces.subdoppler", cfg.forces.subdoppler_enabled);
    kv.set_int("sim.atoms", static_cast<long>(cfg.sim.atom_count));
    kv.set_double("sim.dt_us", cfg.sim.dt / units::microsecond);
    kv.set_double("sim.t_init_uk", cfg.sim.t_init / units::micro_kelvin);
    kv.set_double("sim.r_init_um", cfg.sim.r_init / units::micrometer);
    kv.set_double("sim.max_time_ms", cfg.sim.max_time / units::millisecond);
    kv.set_double("sim.window_ms", cfg.sim.window / units::millisecond);
    kv.set_bool("sim.gravity", cfg.sim.gravity);
    kv.set_int("sim.seed", static_cast<long>(cfg.sim.seed));
    kv.set_int("camera.width", cfg.camera.width);
    kv.set_int("camera.height", cfg.camera.height);
    kv.set_double("camera.pitch_um", cfg.camera.pixel_pitch / units::micrometer);
    kv.set_double("camera.angle_deg",
                  std::atan2(cfg.camera.observation_dir[1],
                             cfg.camera.observation_dir[0]) * 180.0 / pi);
    kv.set_bool("camera.shot_noise", cfg.camera.shot_noise);
    kv.set_double("probe.intensity_mw_cm2", cfg.probe.intensity / units::mw_per_cm2);
    kv.set_double("probe.exposure_us", cfg.probe.exposure / units::microsecond);
    return kv;
}

RunConfig load_run_config(const std::string& path) {
    return config_from_kv(KeyValueConfig::parse_file(path));
}

std::uint64_t config_hash(const RunConfig& cfg) {
    return fnv1a_hash(config_to_kv(cfg).serialize());
}

PointResult run_point(const RunConfig& cfg) {
    cfg.validate();
    EnsembleState state = init_ensemble(cfg.sim.atom_count, cfg.sim.t_init,
                                        cfg.sim.r_init, cfg.preset.species,
                                        cfg.sim.seed);
    EvolveOptions opt;
    opt.dt = cfg.sim.dt;
    opt.max_time = cfg.sim.max_time;
    opt.window = cfg.sim.window;
    opt.gravity = cfg.sim.gravity;
    const EvolveResult r =
        evolve_to_equilibrium(state, cfg.force_field(), cfg.preset.species, opt);
    PointResult out;
    out.temperature = r.stats.temperature;
    out.temperature_err = axis_temperature_spread(r.stats);
    out.converged = r.converged;
    out.stats = r.stats;
    return out;
}

PointResult run_point_tof(const RunConfig& cfg) {
    cfg.validate();
    EnsembleState state = init_ensemble(cfg.sim.atom_count, cfg.sim.t_init,
                                        cfg.sim.r_init, cfg.preset.species,
                                        cfg.sim.seed);
    EvolveOptions opt;
    opt.dt = cfg.sim.dt;
    opt.max_time = cfg.sim.max_time;
    opt.window = cfg.sim.window;
    opt.gravity = cfg.sim.gravity;
    const EvolveResult r =
        evolve_to_equilibrium(state, cfg.force_field(), cfg.preset.species, opt);

    const double rate =
        probe_scatter_rate(cfg.probe.intensity, cfg.preset.transition);
    TofSeries series;
    const std::vector<double> grid = standard_tof_grid();
    for (std::size_t frame = 0; frame < grid.size(); ++frame) {
        EnsembleState expanded = state;
        ballistic_expand(expanded, grid[frame], cfg.sim.gravity);
        CameraGeometry camera = cfg.camera;
        camera.noise_seed = rng::mix(cfg.sim.seed, 0xCA0 + frame);
        const CloudImage img =
            render_image(expanded, camera, cfg.probe.exposure, rate);
        const GaussianFit fit = fit_gaussian(img);
        series.push_back({grid[frame], fit.radius_x});
    }
    const TemperatureFit fit = fit_temperature(series, cfg.preset.species);

    PointResult out;
    out.temperature = fit.temperature;
    out.temperature_err = fit.temperature_err;
    out.converged = r.converged && fit.expanding;
    out.stats = r.stats;
    return out;
}

const char* SweepSpec::param_name(Param p) {
    switch (p) {
        case Param::Detuning: return "detuning";
        case Param::Intensity: return "intensity";
        case Param::BiasField: return "bias_field";
        case Param::GMismatch: return "g_mismatch";
    }
    return "?";
}

const char* SweepSpec::value_unit(Param p) {
    switch (p) {
        case Param::Detuning: return "MHz";
        case Param::Intensity: return "mW/cm2";
        case Param::BiasField: return "G";
        case Param::GMismatch: return "percent";
    }
    return "?";
}

double SweepSpec::display_value(double value) const {
    switch (param) {
        case Param::Detuning: return value / units::mhz_angular;
        case Param::Intensity: return value / units::mw_per_cm2;
        case Param::BiasField: return value / units::gauss;
        case Param::GMismatch: return value * 100.0;
    }
    return value;
}

namespace {

RunConfig apply_param(const SweepSpec& spec, double value) {
    RunConfig cfg = spec.base;
    switch (spec.param) {
        case SweepSpec::Param::Detuning:
            cfg.detuning = value;
            break;
        case SweepSpec::Param::Intensity:
            cfg.total_saturation =
                saturation_parameter(value, cfg.preset.transition);
            break;
        case SweepSpec::Param::BiasField:
            // Uniform-field study: the quadrupole is off so every atom
            // sees the same bias.
            cfg.field.axial_gradient = 0.0;
            cfg.field.bias = value * spec.bias_direction;
            break;
        case SweepSpec::Param::GMismatch:
            cfg.preset.transition.g_upper =
                cfg.preset.transition.g_lower * (1.0 - value);
            break;
    }
    return cfg;
}

double model_temperature(const SweepSpec& spec, const RunConfig& cfg) {
    (void)spec;
    return subdoppler_equilibrium_temperature(cfg.total_saturation, cfg.detuning,
                                              cfg.preset.transition, cfg.forces);
}

SweepResult run_points(const SweepSpec& spec) {
    const std::size_t points = spec.values.size();
    const std::size_t reps = static_cast<std::size_t>(std::max(1, spec.repetitions));
    SweepResult result;
    result.param = spec.param;
    result.config_hash = config_hash(spec.base);
    result.rows.resize(points);

    if (spec.model_only) {
        for (std::size_t p = 0; p < points; ++p) {
            const RunConfig cfg = apply_param(spec, spec.values[p]);
            SweepRow& row = result.rows[p];
            row.value = spec.values[p];
            row.t_mean = model_temperature(spec, cfg);
            row.t_stderr = 0.0;
            row.converged = true;
            row.seed = spec.master_seed;
            row.eq1_doppler = doppler_temperature(cfg.detuning, cfg.preset.transition);
            row.eq3_subdoppler = row.t_mean;
        }
        return result;
    }

    struct Job {
        std::size_t point;
        std::size_t rep;
        RunConfig cfg;
    };
    std::vector<Job> jobs;
    jobs.reserve(points * reps);
    for (std::size_t p = 0; p < points; ++p) {
        for (std::size_t r = 0; r < reps; ++r) {
            Job j{p, r, apply_param(spec, spec.values[p])};
            j.cfg.sim.seed = rng::mix(rng::mix(spec.master_seed, p), r);
            jobs.push_back(std::move(j));
        }
    }

    std::vector<PointResult> outcomes(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            outcomes[i] = spec.full_tof ? run_point_tof(jobs[i].cfg)
                                        : run_point(jobs[i].cfg);
        }
    };
    const int nthreads = std::max(1, spec.threads);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    for (std::size_t p = 0; p < points; ++p) {
        SweepRow& row = result.rows[p];
        row.value = spec.values[p];
        row.converged = true;
        double sum = 0.0, sum2 = 0.0, err_single = 0.0;
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            if (jobs[i].point != p) continue;
            sum += outcomes[i].temperature;
            sum2 += outcomes[i].temperature * outcomes[i].temperature;
            err_single = outcomes[i].temperature_err;
            row.converged = row.converged && outcomes[i].converged;
            if (jobs[i].rep == 0) row.seed = jobs[i].cfg.sim.seed;
        }
        row.t_mean = sum / reps;
        if (reps > 1) {
            const double var =
                std::max(0.0, (sum2 - sum * sum / reps) / (reps - 1));
            row.t_stderr = std::sqrt(var / reps);
        } else {
            row.t_stderr = err_single;
        }
        const RunConfig cfg = apply_param(spec, spec.values[p]);
        row.eq1_doppler = doppler_temperature(cfg.detuning, cfg.preset.transition);
        row.eq3_subdoppler = model_temperature(spec, cfg);
    }
    return result;
}

LinearFit weighted_line_fit(const std::vector<double>& x,
                            const std::vector<double>& y,
                            const std::vector<double>& err) {
    const std::size_t n = x.size();
    std::vector<double> w(n, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        if (err[i] > 0.0) w[i] = 1.0 / (err[i] * err[i]);
    double sw = 0.0, swx = 0.0, swy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sw += w[i];
        swx += w[i] * x[i];
        swy += w[i] * y[i];
    }
    const double xbar = swx / sw, ybar = swy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
        sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += w[i] * r * r;
        ss_tot += w[i] * (y[i] - ybar) * (y[i] - ybar);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

}  // namespace

SweepResult sweep_detuning(const SweepSpec& spec) {
    for (const double v : spec.values)
        if (!(v > 0.0))
            throw std::invalid_argument(
                "sweep_detuning: all detunings must be red (positive)");
    return run_points(spec);
}

SweepResult sweep_intensity(const SweepSpec& spec) {
    for (const double v : spec.values)
        if (!(v > 0.0))
            throw std::invalid_argument("sweep_intensity: intensities must be > 0");
    SweepResult result = run_points(spec);
    std::vector<double> x, y, err;
    for (const SweepRow& row : result.rows) {
        x.push_back(row.value);
        y.push_back(row.t_mean);
        err.push_back(row.t_stderr);
    }
    result.intensity_fit = weighted_line_fit(x, y, err);
    return result;
}

SweepResult sweep_bias_field(const SweepSpec& spec) {
    for (const double v : spec.values)
        if (v < 0.0)
            throw std::invalid_argument("sweep_bias_field: fields must be >= 0");
    SweepSpec sorted = spec;
    std::sort(sorted.values.begin(), sorted.values.end());
    SweepResult result = run_points(sorted);

    // Doppler-only reference at zero field.
    RunConfig ref = apply_param(sorted, 0.0);
    ref.forces.subdoppler_enabled = false;
    ref.sim.seed = rng::mix(spec.master_seed, 0xD0FF1E);
    result.doppler_plateau = run_point(ref).temperature;
    result.b_half = suppression_field(result.rows, result.doppler_plateau);
    return result;
}

SweepResult run_sweep(const SweepSpec& spec) {
    if (spec.values.size() < 2)
        throw std::invalid_argument("sweep: need at least 2 values");
    switch (spec.param) {
        case SweepSpec::Param::Detuning: return sweep_detuning(spec);
        case SweepSpec::Param::Intensity: return sweep_intensity(spec);
        case SweepSpec::Param::BiasField: return sweep_bias_field(spec);
        case SweepSpec::Param::GMismatch:
            throw std::invalid_argument(
                "g-mismatch comparisons run through compare_g_scenarios");
    }
    throw std::logic_error("unreachable");
}

double suppression_field(const std::vector<SweepRow>& rows, double plateau) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (rows.size() < 2) return nan;
    const double t0 = rows.front().t_mean;
    const double mid = 0.5 * (t0 + plateau);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].t_mean >= mid && rows[i - 1].t_mean < mid) {
            const double f = (mid - rows[i - 1].t_mean) /
                             (rows[i].t_mean - rows[i - 1].t_mean);
            return rows[i - 1].value + f * (rows[i].value - rows[i - 1].value);
        }
    }
    return nan;
}

GScenarioReport compare_g_scenarios(const RunConfig& base,
                                    std::vector<double> mismatches,
                                    std::vector<double> bias_fields,
                                    std::uint64_t master_seed, int threads) {
    if (mismatches.empty()) mismatches = {0.0, 0.008, 0.02, 0.30};
    if (bias_fields.empty()) {
        bias_fields = {0.0,  0.2,  0.5,  1.0,  1.5,  2.5,  4.0, 6.0,
                       9.0, 13.0, 18.0, 24.0, 30.0, 38.0, 48.0};
        for (double& b : bias_fields) b *= units::gauss;
    }

    GScenarioReport report;
    for (std::size_t i = 0; i < mismatches.size(); ++i) {
        SweepSpec spec;
        spec.param = SweepSpec::Param::BiasField;
        spec.values = bias_fields;
        spec.base = base;
        spec.base.preset.transition.g_upper =
            base.preset.transition.g_lower * (1.0 - mismatches[i]);
        spec.master_seed = rng::mix(master_seed, i);
        spec.threads = threads;
        GScenario scenario;
        scenario.mismatch = mismatches[i];
        scenario.sweep = sweep_bias_field(spec);
        scenario.b_half = scenario.sweep.b_half;
        report.scenarios.push_back(std::move(scenario));
    }

    // B-half must decrease strictly as the mismatch grows (zero-mismatch
    // scenarios never cross and are excluded).
    std::vector<std::pair<double, double>> crossing;  // (mismatch, b_half)
    for (const GScenario& s : report.scenarios)
        if (s.mismatch > 0.0) crossing.emplace_back(s.mismatch, s.b_half);
    std::sort(crossing.begin(), crossing.end());
    report.ordering_inverse_in_mismatch = !crossing.empty();
    for (std::size_t i = 0; i + 1 < crossing.size(); ++i) {
        if (!(crossing[i].second > crossing[i + 1].second) ||
            std::isnan(crossing[i].second) || std::isnan(crossing[i + 1].second))
            report.ordering_inverse_in_mismatch = false;
    }

    report.tm530_doppler_limit = doppler_limit(transition_preset("Tm530").transition);
    return report;
}

void write_sweep_csv(const std::string& path, const SweepSpec& spec,
                     const SweepResult& result) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "value,unit,t_mean_uk,t_stderr_uk,converged,eq1_doppler_uk,"
           "eq3_subdoppler_uk,config_hash,seed\n";
    for (const SweepRow& row : result.rows) {
        out << format_double(spec.display_value(row.value)) << ','
            << SweepSpec::value_unit(spec.param) << ','
            << format_double(row.t_mean / units::micro_kelvin) << ','
            << format_double(row.t_stderr / units::micro_kelvin) << ','
            << (row.converged ? "true" : "false") << ','
            << format_double(row.eq1_doppler / units::micro_kelvin) << ','
            << format_double(row.eq3_subdoppler / units::micro_kelvin) << ','
            << result.config_hash << ',' << row.seed << '\n';
    }
}

void write_figure_csv(const std::string& path, const SweepSpec& spec,
                      const SweepResult& result) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "x,y,yerr,eq1_doppler,eq3_subdoppler\n";
    for (const SweepRow& row : result.rows) {
        out << format_double(spec.display_value(row.value)) << ','
            << format_double(row.t_mean / units::micro_kelvin) << ','
            << format_double(row.t_stderr / units::micro_kelvin) << ','
            << format_double(row.eq1_doppler / units::micro_kelvin) << ','
            << format_double(row.eq3_subdoppler / units::micro_kelvin) << '\n';
    }
}

void write_manifest(const std::string& path, const SweepSpec& spec,
                    const SweepResult& result) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "version = " << kVersion << "\n";
    out << "param = " << SweepSpec::param_name(spec.param) << "\n";
    out << "unit = " << SweepSpec::value_unit(spec.param) << "\n";
    out << "values =";
    for (const double v : spec.values)
        out << ' ' << format_double(spec.display_value(v));
    out << "\n";
    out << "repetitions = " << spec.repetitions << "\n";
    out << "master_seed = " << spec.master_seed << "\n";
    out << "threads = " << spec.threads << "\n";
    out << "full_tof = " << (spec.full_tof ? "true" : "false") << "\n";
    out << "model_only = " << (spec.model_only ? "true" : "false") << "\n";
    out << "config_hash = " << result.config_hash << "\n";
    if (spec.param == SweepSpec::Param::Intensity) {
        out << "fit.slope_uk_per_mw_cm2 = "
            << format_double(result.intensity_fit.slope * units::mw_per_cm2 /
                             units::micro_kelvin)
            << "\n";
        out << "fit.intercept_uk = "
            << format_double(result.intensity_fit.intercept / units::micro_kelvin)
            << "\n";
        out << "fit.r_squared = " << format_double(result.intensity_fit.r_squared)
            << "\n";
    }
    if (spec.param == SweepSpec::Param::BiasField) {
        out << "doppler_plateau_uk = "
            << format_double(result.doppler_plateau / units::micro_kelvin) << "\n";
        out << "b_half_g = " << format_double(result.b_half / units::gauss) << "\n";
    }
    out << "# base configuration\n";
    const KeyValueConfig base_kv = config_to_kv(spec.base);
    for (const auto& [k, v] : base_kv.entries())
        out << "config." << k << " = " << v << "\n";
}

void write_g_report(const std::string& path, const GScenarioReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "mismatch_percent,b_half_g,t_zero_field_uk,doppler_plateau_uk\n";
    for (const GScenario& s : report.scenarios) {
        out << format_double(s.mismatch * 100.0) << ','
            << format_double(s.b_half / units::gauss) << ','
            << format_double(s.sweep.rows.front().t_mean / units::micro_kelvin)
            << ','
            << format_double(s.sweep.doppler_plateau / units::micro_kelvin) << '\n';
    }
    out << "# ordering_inverse_in_mismatch = "
        << (report.ordering_inverse_in_mismatch ? "true" : "false") << "\n";
    out << "# tm530_doppler_limit_uk = "
        << format_double(report.tm530_doppler_limit / units::micro_kelvin) << "\n";
}

}  // namespace motsim
