#pragma once

#include "entconc/qstate.hpp"

#include <vector>

namespace entconc {

// Parameters of the wave-plate-realizable polarization rotation
//   U(xi, iota, theta) = [[e^{-i xi} cos t,  e^{-i iota} sin t],
//                         [e^{ i iota} sin t, -e^{ i xi} cos t]],
// unitary with determinant -1 for all parameter values.
struct SprParams {
    double xi = 0.0;
    double iota = 0.0;
    double theta = 0.0;
};

Mat2 spr_matrix(const SprParams& p);

// Jones matrix of a half-wave plate with fast axis at `plate_angle`:
//   [[cos 2a, sin 2a], [sin 2a, -cos 2a]].
Mat2 hwp_matrix(double plate_angle);

// Quarter-wave plate. Convention (single source of truth): fast axis
// horizontal retards the vertical component, qwp(0) = diag(1, i); rotated
// plates are qwp(a) = Rot(a) diag(1, i) Rot(-a). Under this convention
// qwp(a)^2 == hwp(a) exactly.
Mat2 qwp_matrix(double plate_angle);

// R_y(t) = [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]].
// Pins the filter convention: R_y(-2w) (cos w, sin w)^T = (1, 0)^T.
Mat2 ry(double angle);

struct OpticalElement {
    enum class Kind { hwp, qwp, phase_shifter, pbs, location_not, identity };
    // Polarization component a phase shifter acts on.
    enum class Component { h = 0, v = 1 };

    Kind kind = Kind::identity;
    double angle = 0.0;        // hwp/qwp plate angle
    double phase = 0.0;        // phase_shifter
    Component component = Component::h;
    int path = 0;              // location the element sits in (in-path kinds)

    static OpticalElement hwp(double plate_angle, int path = 0);
    static OpticalElement qwp(double plate_angle, int path = 0);
    static OpticalElement phase_shifter(double phase, Component c, int path = 0);
    static OpticalElement pbs();
    static OpticalElement location_not();
    static OpticalElement identity();

    bool in_path() const;
    // 2x2 polarization action of an in-path element.
    Mat2 pol_matrix() const;
    // 4x4 action on the polarization (x) location space of one photon,
    // basis {|0P 0L>, |0P 1L>, |1P 0L>, |1P 1L>}. In-path elements act on
    // polarization only in their own path; the PBS transmits |H> and
    // reflects |V| (polarization-controlled location NOT).
    Mat4 polloc_matrix() const;
};

// Elements restricted to {hwp, qwp, phase_shifter}; `product()` includes the
// recorded global phase, so it reproduces `target` exactly rather than up to
// phase.
struct WavePlateSequence {
    std::vector<OpticalElement> elements;
    double global_phase = 0.0;
    Mat2 target = Mat2::Identity();

    Mat2 product() const;
    double residual() const { return max_abs_diff(product(), target); }
};

struct SprSynthesis {
    SprParams params;
    double global_phase = 0.0;  // target = e^{i global_phase} spr_matrix(params)
    WavePlateSequence sequence;
};

// Closed-form synthesis of an arbitrary 2x2 unitary as
// (phase shifter, HWP, phase shifter) plus a recorded global phase.
// Magnitudes give theta in [0, pi/2]; phases give xi, iota in (-pi, pi].
SprSynthesis synthesize_spr(const Mat2& target);

}  // namespace entconc
