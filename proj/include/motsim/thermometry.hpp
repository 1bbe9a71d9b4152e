#ifndef MOTSIM_THERMOMETRY_HPP_
#define MOTSIM_THERMOMETRY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "motsim/atomkit.hpp"
#include "motsim/langevin.hpp"
#include "motsim/vec3.hpp"

namespace motsim {

struct CameraGeometry {
    int width = 512;
    int height = 512;
    double pixel_pitch = 10e-6;  // m/pixel, 1:1 magnification
    // Default: horizontal plane, 45 degrees to the x/y cooling beams.
    Vec3 observation_dir{0.70710678118654752, 0.70710678118654752, 0.0};
    bool shot_noise = false;
    std::uint64_t noise_seed = 0;
};

struct CloudImage {
    int width = 0;
    int height = 0;
    double pixel_pitch = 0.0;
    Vec3 observation_dir{0, 0, 0};
    std::vector<double> counts;  // row-major, non-negative

    double& at(int x, int y) { return counts[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const {
        return counts[static_cast<std::size_t>(y) * width + x];
    }
};

// In-plane image basis: u horizontal, v vertical (+z).
void image_axes(const Vec3& observation_dir, Vec3& u, Vec3& v);

// Resonant probe scattering rate gamma/2 * s / (1 + s).
double probe_scatter_rate(double intensity, const CoolingTransition& t);

// Projects atoms onto the plane perpendicular to the observation
// direction; each atom deposits exposure * scatter_rate expected counts
// into its pixel, optionally Poisson-sampled.
CloudImage render_image(const EnsembleState& state, const CameraGeometry& camera,
                        double exposure, double scatter_rate);

struct GaussianFit {
    double center_x = 0.0;     // m, image plane, relative to image center
    double center_y = 0.0;
    double radius_x = 0.0;     // 1/e radius per image axis, m
    double radius_y = 0.0;
    double amplitude = 0.0;    // counts
    double background = 0.0;   // counts
    double residual_norm = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Levenberg-Marquardt fit of A exp(-(x-x0)^2/rx^2 - (y-y0)^2/ry^2) + bg,
// initialized from image moments.
GaussianFit fit_gaussian(const CloudImage& image);

struct TofPoint {
    double expansion_time = 0.0;  // s
    double radius = 0.0;          // 1/e radius, m
};
using TofSeries = std::vector<TofPoint>;

struct TemperatureFit {
    double temperature = 0.0;      // K
    double radius0 = 0.0;          // m
    double temperature_err = 0.0;  // standard error, K
    double radius0_err = 0.0;      // m
    double residual_norm = 0.0;    // in r^2 space, m^2
    bool expanding = true;         // false when the fitted slope was negative
};

// Fit of r(t)^2 = r(0)^2 + (2 kB T / m) t^2, linear in (t^2, r^2).
TemperatureFit fit_temperature(const TofSeries& series, const AtomSpecies& species);

// The paper's 15-frame expansion time grid (s).
std::vector<double> standard_tof_grid();

// --- File formats ---

struct ImageMeta {
    double pixel_pitch = 0.0;      // m
    double observation_angle = 0.0;  // degrees in the horizontal plane
    double exposure = 0.0;         // s
    double expansion_time = 0.0;   // s
    double count_scale = 1.0;      // counts per stored gray level
};

// Portable graymap (P2 ascii or P5 binary, 16-bit) plus a key-value
// sidecar <path>.meta holding ImageMeta.
void write_pgm(const std::string& path, const CloudImage& image,
               const ImageMeta& meta, bool binary = true);
CloudImage read_pgm(const std::string& path, ImageMeta& meta);

TofSeries read_tof_csv(const std::string& path);           // dt_ms,radius_um
void write_tof_csv(const std::string& path, const TofSeries& series);
void write_temperature_fit(const std::string& path, const TemperatureFit& fit);

}  // namespace motsim

#endif
