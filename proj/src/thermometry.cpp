#include "motsim/thermometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "motsim/config.hpp"
#include "motsim/rng.hpp"

namespace motsim {

using namespace motsim::constants;

void image_axes(const Vec3& observation_dir, Vec3& u, Vec3& v) {
    const Vec3 d = normalized(observation_dir);
    const Vec3 up{0, 0, 1};
    Vec3 h{d[1] * up[2] - d[2] * up[1], d[2] * up[0] - d[0] * up[2],
           d[0] * up[1] - d[1] * up[0]};
    if (norm(h) < 1e-12)
        throw std::invalid_argument("image_axes: observation direction is vertical");
    u = normalized(h);
    v = up;
}

double probe_scatter_rate(double intensity, const CoolingTransition& t) {
    const double s = saturation_parameter(intensity, t);
    return 0.5 * t.linewidth * s / (1.0 + s);
}

CloudImage render_image(const EnsembleState& state, const CameraGeometry& camera,
                        double exposure, double scatter_rate) {
    if (!(exposure > 0.0))
        throw std::invalid_argument("render_image: exposure must be > 0");
    CloudImage img;
    img.width = camera.width;
    img.height = camera.height;
    img.pixel_pitch = camera.pixel_pitch;
    img.observation_dir = normalized(camera.observation_dir);
    img.counts.assign(static_cast<std::size_t>(img.width) * img.height, 0.0);

    Vec3 u, v;
    image_axes(img.observation_dir, u, v);
    const double per_atom = exposure * scatter_rate;
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double pu = dot(state.positions[i], u);
        const double pv = dot(state.positions[i], v);
        const int ix = static_cast<int>(std::floor(pu / img.pixel_pitch)) + img.width / 2;
        const int iy = static_cast<int>(std::floor(pv / img.pixel_pitch)) + img.height / 2;
        if (ix < 0 || ix >= img.width || iy < 0 || iy >= img.height) continue;
        img.at(ix, iy) += per_atom;
    }
    if (camera.shot_noise) {
        for (std::size_t p = 0; p < img.counts.size(); ++p) {
            if (img.counts[p] == 0.0) continue;
            const rng::CounterStream s(camera.noise_seed, rng::kShotNoise, p);
            img.counts[p] = static_cast<double>(s.poisson(0, img.counts[p]));
        }
    }
    return img;
}

namespace {

// Solve the 6x6 system M x = b in place by Gaussian elimination.
bool solve6(double m[6][6], double b[6], double x[6]) {
    int piv[6];
    for (int i = 0; i < 6; ++i) piv[i] = i;
    for (int col = 0; col < 6; ++col) {
        int best = col;
        for (int r = col + 1; r < 6; ++r)
            if (std::abs(m[r][col]) > std::abs(m[best][col])) best = r;
        if (std::abs(m[best][col]) < 1e-300) return false;
        if (best != col) {
            for (int c = 0; c < 6; ++c) std::swap(m[col][c], m[best][c]);
            std::swap(b[col], b[best]);
        }
        for (int r = col + 1; r < 6; ++r) {
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 6; ++c) m[r][c] -= f * m[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int r = 5; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < 6; ++c) s -= m[r][c] * x[c];
        x[r] = s / m[r][r];
    }
    (void)piv;
    return true;
}

struct GaussParams {
    // amplitude, center x/y, 1/e radius x/y (pixels), background
    double a, x0, y0, rx, ry, bg;
};

double chi2(const CloudImage& img, const GaussParams& p) {
    double s = 0.0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double dx = (x - p.x0) / p.rx;
            const double dy = (y - p.y0) / p.ry;
            const double model = p.a * std::exp(-dx * dx - dy * dy) + p.bg;
            const double r = img.at(x, y) - model;
            s += r * r;
        }
    }
    return s;
}

}  // namespace

GaussianFit fit_gaussian(const CloudImage& image) {
    const int w = image.width, h = image.height;
    std::size_t nonzero = 0;
    for (const double c : image.counts)
        if (c > 0.0) ++nonzero;
    if (nonzero == 0)
        throw std::invalid_argument("fit_gaussian: image has no nonzero pixel");
    if (nonzero < 5)
        throw std::runtime_error(
            "fit_gaussian: degenerate data, fewer than 5 nonzero pixels");

    // Moment initialization: background from the border, second moments
    // of the background-subtracted counts.
    double border = 0.0;
    std::size_t nborder = 0;
    for (int x = 0; x < w; ++x) {
        border += image.at(x, 0) + image.at(x, h - 1);
        nborder += 2;
    }
    for (int y = 1; y < h - 1; ++y) {
        border += image.at(0, y) + image.at(w - 1, y);
        nborder += 2;
    }
    const double bg0 = border / static_cast<double>(nborder);
    double wsum = 0.0, mx = 0.0, my = 0.0, peak = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double c = std::max(image.at(x, y) - bg0, 0.0);
            wsum += c;
            mx += c * x;
            my += c * y;
            peak = std::max(peak, image.at(x, y) - bg0);
        }
    if (wsum <= 0.0)
        throw std::runtime_error("fit_gaussian: no signal above background");
    mx /= wsum;
    my /= wsum;
    double vx = 0.0, vy = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double c = std::max(image.at(x, y) - bg0, 0.0);
            vx += c * (x - mx) * (x - mx);
            vy += c * (y - my) * (y - my);
        }
    vx /= wsum;
    vy /= wsum;

    GaussParams p{peak, mx, my, std::max(std::sqrt(2.0 * vx), 0.5),
                  std::max(std::sqrt(2.0 * vy), 0.5), bg0};

    // Levenberg-Marquardt.
    double lambda = 1e-3;
    double prev = chi2(image, p);
    GaussianFit fit;
    constexpr int kMaxIter = 100;
    int iter = 0;
    for (; iter < kMaxIter; ++iter) {
        double jtj[6][6] = {};
        double jtr[6] = {};
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double dx = (x - p.x0) / p.rx;
                const double dy = (y - p.y0) / p.ry;
                const double e = std::exp(-dx * dx - dy * dy);
                const double model = p.a * e + p.bg;
                const double r = image.at(x, y) - model;
                const double j[6] = {
                    e,
                    p.a * e * 2.0 * dx / p.rx,
                    p.a * e * 2.0 * dy / p.ry,
                    p.a * e * 2.0 * dx * dx / p.rx,
                    p.a * e * 2.0 * dy * dy / p.ry,
                    1.0,
                };
                for (int a = 0; a < 6; ++a) {
                    jtr[a] += j[a] * r;
                    for (int b = a; b < 6; ++b) jtj[a][b] += j[a] * j[b];
                }
            }
        }
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < a; ++b) jtj[a][b] = jtj[b][a];

        double m[6][6], rhs[6], delta[6];
        for (int a = 0; a < 6; ++a) {
            for (int b = 0; b < 6; ++b) m[a][b] = jtj[a][b];
            m[a][a] *= (1.0 + lambda);
            rhs[a] = jtr[a];
        }
        if (!solve6(m, rhs, delta)) {
            lambda *= 10.0;
            continue;
        }
        GaussParams trial = p;
        trial.a += delta[0];
        trial.x0 += delta[1];
        trial.y0 += delta[2];
        trial.rx += delta[3];
        trial.ry += delta[4];
        trial.bg += delta[5];
        trial.rx = std::abs(trial.rx);
        trial.ry = std::abs(trial.ry);
        if (trial.rx < 1e-3 || trial.ry < 1e-3) {
            lambda *= 10.0;
            continue;
        }
        const double next = chi2(image, trial);
        if (next < prev) {
            const bool done = (prev - next) < 1e-12 * std::max(prev, 1e-300);
            p = trial;
            prev = next;
            lambda = std::max(lambda * 0.3, 1e-12);
            if (done) {
                fit.converged = true;
                break;
            }
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
    }
    fit.iterations = iter + 1;
    fit.amplitude = p.a;
    fit.background = p.bg;
    fit.center_x = (p.x0 - image.width / 2) * image.pixel_pitch;
    fit.center_y = (p.y0 - image.height / 2) * image.pixel_pitch;
    fit.radius_x = p.rx * image.pixel_pitch;
    fit.radius_y = p.ry * image.pixel_pitch;
    fit.residual_norm = std::sqrt(prev);
    return fit;
}

TemperatureFit fit_temperature(const TofSeries& series, const AtomSpecies& species) {
    if (series.size() < 3)
        throw std::invalid_argument("fit_temperature: need at least 3 points");
    for (std::size_t i = 0; i < series.size(); ++i)
        for (std::size_t j = i + 1; j < series.size(); ++j)
            if (series[i].expansion_time == series[j].expansion_time)
                throw std::invalid_argument("fit_temperature: duplicate expansion times");

    // Ordinary least squares of r^2 on t^2.
    const std::size_t n = series.size();
    double sx = 0.0, sy = 0.0;
    for (const TofPoint& p : series) {
        sx += p.expansion_time * p.expansion_time;
        sy += p.radius * p.radius;
    }
    const double xbar = sx / n, ybar = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const TofPoint& p : series) {
        const double dx = p.expansion_time * p.expansion_time - xbar;
        const double dy = p.radius * p.radius - ybar;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    double slope = sxy / sxx;
    const double intercept = ybar - slope * xbar;

    double ssr = 0.0;
    for (const TofPoint& p : series) {
        const double x = p.expansion_time * p.expansion_time;
        const double r = p.radius * p.radius - (intercept + slope * x);
        ssr += r * r;
    }
    const double sigma2 = n > 2 ? ssr / static_cast<double>(n - 2) : 0.0;
    const double slope_err = std::sqrt(sigma2 / sxx);
    const double intercept_err =
        std::sqrt(sigma2 * (1.0 / n + xbar * xbar / sxx));

    TemperatureFit fit;
    if (slope < 0.0) {
        // Cloud not expanding: inconsistent data, report clamped T.
        fit.expanding = false;
        slope = 0.0;
    }
    fit.temperature = slope * species.mass / (2.0 * k_boltzmann);
    fit.temperature_err = slope_err * species.mass / (2.0 * k_boltzmann);
    fit.radius0 = std::sqrt(std::max(intercept, 0.0));
    fit.radius0_err = fit.radius0 > 0.0 ? intercept_err / (2.0 * fit.radius0) : 0.0;
    fit.residual_norm = std::sqrt(ssr);
    return fit;
}

std::vector<double> standard_tof_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 12; ++i) grid.push_back(0.5e-3 * i);  // 0 .. 6 ms
    grid.push_back(7e-3);
    grid.push_back(8e-3);
    return grid;
}

void write_pgm(const std::string& path, const CloudImage& image,
               const ImageMeta& meta_in, bool binary) {
    double maxc = 0.0;
    for (const double c : image.counts) maxc = std::max(maxc, c);
    ImageMeta meta = meta_in;
    meta.pixel_pitch = image.pixel_pitch;
    meta.count_scale = maxc > 0.0 ? maxc / 65535.0 : 1.0;

    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << (binary ? "P5" : "P2") << "\n"
        << image.width << " " << image.height << "\n65535\n";
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const unsigned level = static_cast<unsigned>(
                std::lround(image.at(x, y) / meta.count_scale));
            if (binary) {
                const unsigned char hi = static_cast<unsigned char>(level >> 8);
                const unsigned char lo = static_cast<unsigned char>(level & 0xff);
                out.put(static_cast<char>(hi));
                out.put(static_cast<char>(lo));
            } else {
                out << level << (x + 1 == image.width ? '\n' : ' ');
            }
        }
    }

    KeyValueConfig side;
    side.set_double("pixel_pitch_um", meta.pixel_pitch / units::micrometer);
    side.set_double("observation_angle_deg", meta.observation_angle);
    side.set_double("exposure_us", meta.exposure / units::microsecond);
    side.set_double("expansion_time_ms", meta.expansion_time / units::millisecond);
    side.set_double("count_scale", meta.count_scale);
    side.write_file(path + ".meta");
}

CloudImage read_pgm(const std::string& path, ImageMeta& meta) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P2" && magic != "P5")
        throw std::runtime_error(path + ": not a P2/P5 graymap");
    auto next_token = [&in, &path]() {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        throw std::runtime_error(path + ": truncated graymap header");
    };
    const int w = std::stoi(next_token());
    const int h = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (w <= 0 || h <= 0 || maxval <= 0)
        throw std::runtime_error(path + ": bad graymap header");

    meta = ImageMeta{};
    KeyValueConfig side = KeyValueConfig::parse_file(path + ".meta");
    meta.pixel_pitch = side.get_double("pixel_pitch_um") * units::micrometer;
    meta.observation_angle = side.get_double("observation_angle_deg", 45.0);
    meta.exposure = side.get_double("exposure_us", 0.0) * units::microsecond;
    meta.expansion_time =
        side.get_double("expansion_time_ms", 0.0) * units::millisecond;
    meta.count_scale = side.get_double("count_scale", 1.0);

    CloudImage img;
    img.width = w;
    img.height = h;
    img.pixel_pitch = meta.pixel_pitch;
    const double a = meta.observation_angle * pi / 180.0;
    img.observation_dir = {std::cos(a), std::sin(a), 0.0};
    img.counts.resize(static_cast<std::size_t>(w) * h);
    if (magic == "P2") {
        for (double& c : img.counts) {
            long level;
            if (!(in >> level)) throw std::runtime_error(path + ": truncated P2 data");
            c = level * meta.count_scale;
        }
    } else {
        in.get();  // single whitespace after maxval
        const int bytes = maxval > 255 ? 2 : 1;
        for (double& c : img.counts) {
            unsigned level = 0;
            for (int b = 0; b < bytes; ++b) {
                const int ch = in.get();
                if (ch == EOF) throw std::runtime_error(path + ": truncated P5 data");
                level = (level << 8) | static_cast<unsigned>(ch);
            }
            c = level * meta.count_scale;
        }
    }
    return img;
}

TofSeries read_tof_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    if (line != "dt_ms,radius_um")
        throw std::runtime_error(path + ": expected header 'dt_ms,radius_um'");
    TofSeries series;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error(path + ": bad CSV row '" + line + "'");
        TofPoint p;
        p.expansion_time = std::stod(line.substr(0, comma)) * units::millisecond;
        p.radius = std::stod(line.substr(comma + 1)) * units::micrometer;
        series.push_back(p);
    }
    return series;
}

void write_tof_csv(const std::string& path, const TofSeries& series) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "dt_ms,radius_um\n";
    for (const TofPoint& p : series)
        out << format_double(p.expansion_time / units::millisecond) << ','
            << format_double(p.radius / units::micrometer) << '\n';
}

void write_temperature_fit(const std::string& path, const TemperatureFit& fit) {
    KeyValueConfig out;
    out.set_double("temperature_uk", fit.temperature / units::micro_kelvin);
    out.set_double("temperature_err_uk", fit.temperature_err / units::micro_kelvin);
    out.set_double("radius0_um", fit.radius0 / units::micrometer);
    out.set_double("radius0_err_um", fit.radius0_err / units::micrometer);
    out.set_double("residual_norm_m2", fit.residual_norm);
    out.set_bool("expanding", fit.expanding);
    out.write_file(path);
}

}  // namespace motsim
