#include "motsim/fieldgeom.hpp"

#include <cmath>
#include <stdexcept>

namespace motsim {

double BeamSet::total_saturation() const {
    double s = 0.0;
    for (const Beam& b : beams) s += b.saturation;
    return s;
}

double BeamSet::mean_detuning() const {
    double d = 0.0;
    for (const Beam& b : beams) d += b.detuning;
    return d / 6.0;
}

Vec3 canonical_axis(const Vec3& direction) {
    for (int j = 0; j < 3; ++j) {
        if (direction[j] > 0.0) return direction;
        if (direction[j] < 0.0) return -direction;
    }
    return direction;
}

std::array<Vec3, 3> BeamSet::pair_axes() const {
    std::array<Vec3, 3> axes{};
    int n = 0;
    for (int i = 0; i < 6; ++i) {
        const Vec3 axis = canonical_axis(beams[i].direction);
        bool seen = false;
        for (int a = 0; a < n; ++a)
            if (norm(axes[a] - axis) < 1e-9) seen = true;
        if (seen) continue;
        if (n == 3) throw std::runtime_error("BeamSet: more than 3 pair axes");
        axes[n++] = axis;
    }
    if (n != 3) throw std::runtime_error("BeamSet: expected 3 pair axes");
    return axes;
}

std::array<int, 3> BeamSet::pair_orientations() const {
    const std::array<Vec3, 3> axes = pair_axes();
    std::array<int, 3> orient{};
    for (int a = 0; a < 3; ++a) {
        for (const Beam& b : beams) {
            if (norm(b.direction - axes[a]) < 1e-9) {
                orient[a] = b.helicity;
                break;
            }
        }
        if (orient[a] == 0)
            throw std::runtime_error("BeamSet: no beam along a pair axis");
    }
    return orient;
}

void BeamSet::validate() const {
    for (const Beam& b : beams) {
        if (std::abs(norm(b.direction) - 1.0) > 1e-12)
            throw std::invalid_argument("BeamSet: beam direction not unit length");
        if (b.saturation < 0.0)
            throw std::invalid_argument("BeamSet: negative saturation");
        if (b.helicity != 1 && b.helicity != -1)
            throw std::invalid_argument("BeamSet: helicity must be +-1");
    }
    // Pairing: each beam must have a counter-propagating partner with
    // opposite helicity, and pair axes must be mutually orthogonal.
    std::array<bool, 6> paired{};
    for (int i = 0; i < 6; ++i) {
        if (paired[i]) continue;
        bool found = false;
        for (int j = i + 1; j < 6; ++j) {
            if (paired[j]) continue;
            if (norm(beams[i].direction + beams[j].direction) < 1e-9) {
                if (beams[i].helicity == beams[j].helicity)
                    throw std::invalid_argument("BeamSet: paired beams must have opposite helicity");
                paired[i] = paired[j] = true;
                found = true;
                break;
            }
        }
        if (!found)
            throw std::invalid_argument("BeamSet: beam without counter-propagating partner");
    }
    const auto axes = pair_axes();
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
            if (std::abs(dot(axes[a], axes[b])) > 1e-9)
                throw std::invalid_argument("BeamSet: pair axes not orthogonal");
}

BeamSet standard_mot_beams(double detuning, double s_per_beam) {
    if (s_per_beam < 0.0)
        throw std::invalid_argument("standard_mot_beams: s must be >= 0");
    BeamSet set;
    const std::array<Vec3, 3> axes = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    for (int a = 0; a < 3; ++a) {
        const int h = (a == 2) ? +1 : -1;
        set.beams[2 * a] = {axes[a], detuning, s_per_beam, h};
        set.beams[2 * a + 1] = {-axes[a], detuning, s_per_beam, -h};
    }
    return set;
}

Vec3 field_at(const Vec3& position, const FieldConfig& cfg) {
    const double b = cfg.axial_gradient;
    return Vec3{-0.5 * b * position[0], -0.5 * b * position[1], b * position[2]} +
           cfg.bias;
}

}  // namespace motsim
