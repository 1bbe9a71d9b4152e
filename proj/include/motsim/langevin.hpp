#ifndef MOTSIM_LANGEVIN_HPP_
#define MOTSIM_LANGEVIN_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "motsim/atomkit.hpp"
#include "motsim/forces.hpp"
#include "motsim/rng.hpp"
#include "motsim/vec3.hpp"

namespace motsim {

struct EnsembleState {
    std::vector<Vec3> positions;   // m
    std::vector<Vec3> velocities;  // m/s
    double time = 0.0;             // s
    std::uint64_t seed = 0;
    std::uint64_t step_count = 0;  // noise counter, advances once per step

    std::size_t size() const { return positions.size(); }
};

struct CloudStats {
    Vec3 temperature_axis{0, 0, 0};  // K
    double temperature = 0.0;        // mean of the three axes, K
    Vec3 center{0, 0, 0};            // m
    Vec3 radius_1e{0, 0, 0};         // sqrt(2) * position std dev, m
    std::size_t count = 0;
};

// Gaussian cloud with 1/e radius r_init and Maxwell-Boltzmann velocities
// at t_init; fully determined by the seed.
EnsembleState init_ensemble(std::size_t n, double t_init, double r_init,
                            const AtomSpecies& species, std::uint64_t seed);

CloudStats cloud_stats(const EnsembleState& state, const AtomSpecies& species);

// Free flight (optionally under gravity), applied in closed form.
void ballistic_expand(EnsembleState& state, double dt, bool gravity = true);

void write_snapshot_csv(const std::string& path, const EnsembleState& state);

struct TrajectoryPoint {
    double time = 0.0;
    double temperature = 0.0;
    double radius = 0.0;
};
void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectoryPoint>& traj);

struct EvolveOptions {
    double dt = 1e-6;               // s
    double max_time = 30e-3;        // s
    double window = 2e-3;           // s, equilibration detection window
    double drift_tolerance = 0.02;  // relative drift between windows
    bool gravity = true;
    int sample_stride = 25;         // steps between temperature samples
};

struct EvolveResult {
    CloudStats stats;        // temperature averaged over the last window
    bool converged = false;
    double elapsed = 0.0;    // s of simulated time
    std::vector<TrajectoryPoint> trajectory;
};

// Euler-Maruyama step: v += (F/m) dt + sqrt(2 D dt)/m xi, x += v dt.
template <typename ForceFn>
void step(EnsembleState& state, double dt, ForceFn&& force,
          const AtomSpecies& species, bool gravity = true) {
    const double inv_m = 1.0 / species.mass;
    const std::size_t n = state.size();
    for (std::size_t i = 0; i < n; ++i) {
        const ForceSample f = force(state.positions[i], state.velocities[i]);
        const rng::CounterStream noise(state.seed, rng::kDynamics, i);
        double xi[4];
        noise.normal_pair(2 * state.step_count, xi[0], xi[1]);
        noise.normal_pair(2 * state.step_count + 1, xi[2], xi[3]);
        Vec3& v = state.velocities[i];
        for (int j = 0; j < 3; ++j) {
            v[j] += f.force[j] * inv_m * dt +
                    std::sqrt(2.0 * f.diffusion[j] * dt) * inv_m * xi[j];
        }
        if (gravity) v[2] -= constants::g_earth * dt;
        state.positions[i] += dt * v;
    }
    state.time += dt;
    ++state.step_count;
}

namespace detail {
CloudStats average_window(const std::vector<CloudStats>& samples,
                          const CloudStats& last);
}

// Steps until the windowed mean temperature drifts by less than
// drift_tolerance between consecutive windows, or max_time is reached.
// Non-convergence is flagged, not an error.
template <typename ForceFn>
EvolveResult evolve_to_equilibrium(EnsembleState& state, ForceFn&& force,
                                   const AtomSpecies& species,
                                   const EvolveOptions& opt) {
    if (!(opt.dt > 0.0)) throw std::invalid_argument("evolve: dt must be > 0");
    if (!(opt.max_time > 0.0))
        throw std::invalid_argument("evolve: max_time must be > 0");

    EvolveResult result;
    const std::uint64_t steps_per_window =
        std::max<std::uint64_t>(1, static_cast<std::uint64_t>(opt.window / opt.dt));
    const std::uint64_t max_steps =
        static_cast<std::uint64_t>(opt.max_time / opt.dt);

    double prev_window_t = -1.0;
    std::vector<CloudStats> samples;
    std::uint64_t steps = 0;
    while (steps < max_steps) {
        samples.clear();
        for (std::uint64_t s = 0; s < steps_per_window && steps < max_steps;
             ++s, ++steps) {
            step(state, opt.dt, force, species, opt.gravity);
            if (steps % static_cast<std::uint64_t>(opt.sample_stride) == 0)
                samples.push_back(cloud_stats(state, species));
        }
        const CloudStats last = cloud_stats(state, species);
        result.stats = detail::average_window(samples, last);
        result.trajectory.push_back(
            {state.time, result.stats.temperature, result.stats.radius_1e[0]});
        const double t_now = result.stats.temperature;
        if (prev_window_t > 0.0 &&
            std::abs(t_now - prev_window_t) < opt.drift_tolerance * prev_window_t) {
            result.converged = true;
            break;
        }
        prev_window_t = t_now;
    }
    result.elapsed = state.time;
    return result;
}

}  // namespace motsim

#endif
