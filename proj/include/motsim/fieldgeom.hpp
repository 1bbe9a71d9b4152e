#ifndef MOTSIM_FIELDGEOM_HPP_
#define MOTSIM_FIELDGEOM_HPP_

#include <array>

#include "motsim/vec3.hpp"

namespace motsim {

struct Beam {
    Vec3 direction{0, 0, 0};  // unit propagation vector
    double detuning = 0.0;    // red detuning magnitude, rad/s
    double saturation = 0.0;  // per-beam s = I / I_sat
    // Circular polarization sign relative to the positive orientation of
    // the beam's pair axis; counter-propagating partners are opposite.
    int helicity = +1;
};

// Positive orientation of an axis: the given direction, sign-flipped if
// its first nonzero component is negative.
Vec3 canonical_axis(const Vec3& direction);

// Six beams forming three counter-propagating pairs along three mutually
// orthogonal axes; opposite beams carry opposite helicity.
struct BeamSet {
    std::array<Beam, 6> beams;

    double total_saturation() const;
    // Mean red-detuning magnitude across beams.
    double mean_detuning() const;
    // Positive-orientation axis of each pair; Zeeman shifts are resolved
    // along these axes.
    std::array<Vec3, 3> pair_axes() const;
    // Helicity of the beam propagating along +pair_axes()[i].
    std::array<int, 3> pair_orientations() const;
    void validate() const;
};

// Beams along +-x, +-y, +-z with equal detuning and per-beam saturation.
// The axial (z) pair carries helicity +1 along +z; the radial pairs are
// reversed to match the opposite sign of the quadrupole's radial
// gradient, as in a standard MOT.
BeamSet standard_mot_beams(double detuning, double s_per_beam);

// Quadrupole (axial axis z) plus uniform bias. The radial gradient is
// -b'/2 so that div B = 0.
struct FieldConfig {
    double axial_gradient = 0.0;  // b', T/m
    Vec3 bias{0, 0, 0};           // T
};

Vec3 field_at(const Vec3& position, const FieldConfig& cfg);

}  // namespace motsim

#endif
