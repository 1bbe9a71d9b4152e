#include "motsim/langevin.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "motsim/config.hpp"

namespace motsim {

using namespace motsim::constants;

EnsembleState init_ensemble(std::size_t n, double t_init, double r_init,
                            const AtomSpecies& species, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("init_ensemble: N must be >= 1");
    if (t_init < 0.0) throw std::invalid_argument("init_ensemble: T_init must be >= 0");
    if (!(r_init > 0.0)) throw std::invalid_argument("init_ensemble: r_init must be > 0");
    species.validate();

    EnsembleState state;
    state.seed = seed;
    state.positions.resize(n);
    state.velocities.resize(n);
    // 1/e radius of the density profile is sqrt(2) sigma.
    const double sigma_x = r_init / std::sqrt(2.0);
    const double sigma_v = std::sqrt(k_boltzmann * t_init / species.mass);
    for (std::size_t i = 0; i < n; ++i) {
        const rng::CounterStream pos(seed, rng::kInitPositions, i);
        const rng::CounterStream vel(seed, rng::kInitVelocities, i);
        double a, b;
        pos.normal_pair(0, a, b);
        state.positions[i][0] = sigma_x * a;
        state.positions[i][1] = sigma_x * b;
        pos.normal_pair(1, a, b);
        state.positions[i][2] = sigma_x * a;
        vel.normal_pair(0, a, b);
        state.velocities[i][0] = sigma_v * a;
        state.velocities[i][1] = sigma_v * b;
        vel.normal_pair(1, a, b);
        state.velocities[i][2] = sigma_v * a;
    }
    return state;
}

CloudStats cloud_stats(const EnsembleState& state, const AtomSpecies& species) {
    const std::size_t n = state.size();
    if (n < 2) throw std::invalid_argument("cloud_stats: need at least 2 atoms");

    CloudStats out;
    out.count = n;
    Vec3 mean_v{0, 0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        out.center += state.positions[i];
        mean_v += state.velocities[i];
    }
    out.center = (1.0 / n) * out.center;
    mean_v = (1.0 / n) * mean_v;

    Vec3 var_x{0, 0, 0}, var_v{0, 0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double dx = state.positions[i][j] - out.center[j];
            const double dv = state.velocities[i][j] - mean_v[j];
            var_x[j] += dx * dx;
            var_v[j] += dv * dv;
        }
    }
    for (int j = 0; j < 3; ++j) {
        var_x[j] /= static_cast<double>(n - 1);
        var_v[j] /= static_cast<double>(n - 1);
        out.temperature_axis[j] = species.mass * var_v[j] / k_boltzmann;
        out.radius_1e[j] = std::sqrt(2.0 * var_x[j]);
    }
    out.temperature = (out.temperature_axis[0] + out.temperature_axis[1] +
                       out.temperature_axis[2]) / 3.0;
    return out;
}

void ballistic_expand(EnsembleState& state, double dt, bool gravity) {
    if (dt < 0.0) throw std::invalid_argument("ballistic_expand: dt must be >= 0");
    for (std::size_t i = 0; i < state.size(); ++i) {
        state.positions[i] += dt * state.velocities[i];
        if (gravity) {
            state.positions[i][2] -= 0.5 * g_earth * dt * dt;
            state.velocities[i][2] -= g_earth * dt;
        }
    }
    state.time += dt;
}

void write_snapshot_csv(const std::string& path, const EnsembleState& state) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "index,x,y,z,vx,vy,vz\n";
    for (std::size_t i = 0; i < state.size(); ++i) {
        out << i;
        for (int j = 0; j < 3; ++j) out << ',' << format_double(state.positions[i][j]);
        for (int j = 0; j < 3; ++j) out << ',' << format_double(state.velocities[i][j]);
        out << '\n';
    }
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectoryPoint>& traj) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "time,T,radius\n";
    for (const TrajectoryPoint& p : traj) {
        out << format_double(p.time) << ',' << format_double(p.temperature) << ','
            << format_double(p.radius) << '\n';
    }
}

namespace detail {

CloudStats average_window(const std::vector<CloudStats>& samples,
                          const CloudStats& last) {
    CloudStats out = last;
    if (samples.empty()) return out;
    Vec3 t_axis{0, 0, 0};
    for (const CloudStats& s : samples) t_axis += s.temperature_axis;
    t_axis = (1.0 / samples.size()) * t_axis;
    out.temperature_axis = t_axis;
    out.temperature = (t_axis[0] + t_axis[1] + t_axis[2]) / 3.0;
    return out;
}

}  // namespace detail

}  // namespace motsim
