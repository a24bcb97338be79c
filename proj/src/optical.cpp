#include "entconc/optical.hpp"

#include <cmath>

namespace entconc {

namespace {

double wrap_phase(double phi) {
    // to (-pi, pi]
    phi = std::remainder(phi, 2.0 * M_PI);
    if (phi <= -M_PI) phi += 2.0 * M_PI;
    return phi;
}

Eigen::Matrix2d rot2(double a) {
    Eigen::Matrix2d r;
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return r;
}

}  // namespace

Mat2 spr_matrix(const SprParams& p) {
    const cx ei_xi = std::polar(1.0, p.xi);
    const cx ei_iota = std::polar(1.0, p.iota);
    Mat2 u;
    u << std::conj(ei_xi) * std::cos(p.theta), std::conj(ei_iota) * std::sin(p.theta),
        ei_iota * std::sin(p.theta), -ei_xi * std::cos(p.theta);
    return u;
}

Mat2 hwp_matrix(double plate_angle) {
    Mat2 m;
    m << std::cos(2 * plate_angle), std::sin(2 * plate_angle),
        std::sin(2 * plate_angle), -std::cos(2 * plate_angle);
    return m;
}

Mat2 qwp_matrix(double plate_angle) {
    Mat2 axis = Mat2::Zero();
    axis(0, 0) = 1.0;
    axis(1, 1) = cx(0.0, 1.0);
    return rot2(plate_angle).cast<cx>() * axis * rot2(-plate_angle).cast<cx>();
}

Mat2 ry(double angle) {
    Mat2 m;
    m << std::cos(angle / 2), -std::sin(angle / 2), std::sin(angle / 2), std::cos(angle / 2);
    return m;
}

OpticalElement OpticalElement::hwp(double plate_angle, int path) {
    OpticalElement e;
    e.kind = Kind::hwp;
    e.angle = plate_angle;
    e.path = path;
    return e;
}

OpticalElement OpticalElement::qwp(double plate_angle, int path) {
    OpticalElement e;
    e.kind = Kind::qwp;
    e.angle = plate_angle;
    e.path = path;
    return e;
}

OpticalElement OpticalElement::phase_shifter(double phase, Component c, int path) {
    OpticalElement e;
    e.kind = Kind::phase_shifter;
    e.phase = phase;
    e.component = c;
    e.path = path;
    return e;
}

OpticalElement OpticalElement::pbs() {
    OpticalElement e;
    e.kind = Kind::pbs;
    return e;
}

OpticalElement OpticalElement::location_not() {
    OpticalElement e;
    e.kind = Kind::location_not;
    return e;
}

OpticalElement OpticalElement::identity() { return OpticalElement{}; }

bool OpticalElement::in_path() const {
    return kind == Kind::hwp || kind == Kind::qwp || kind == Kind::phase_shifter;
}

Mat2 OpticalElement::pol_matrix() const {
    switch (kind) {
        case Kind::hwp: return hwp_matrix(angle);
        case Kind::qwp: return qwp_matrix(angle);
        case Kind::phase_shifter: {
            Mat2 m = Mat2::Identity();
            m(static_cast<int>(component), static_cast<int>(component)) = std::polar(1.0, phase);
            return m;
        }
        case Kind::identity: return Mat2::Identity();
        default:
            throw Error(Errc::dimension_mismatch, "element acts on both paths, no 2x2 form");
    }
}

Mat4 OpticalElement::polloc_matrix() const {
    const Mat2 id = Mat2::Identity();
    switch (kind) {
        case Kind::pbs: {
            Mat2 p0 = Mat2::Zero(), p1 = Mat2::Zero();
            p0(0, 0) = 1;
            p1(1, 1) = 1;
            return kron(p0, id) + kron(p1, pauli(1));
        }
        case Kind::location_not:
            return kron(id, pauli(1));
        case Kind::identity:
            return Mat4::Identity();
        default: {
            Mat2 proj_own = Mat2::Zero(), proj_other = Mat2::Zero();
            proj_own(path, path) = 1;
            proj_other(1 - path, 1 - path) = 1;
            return kron(pol_matrix(), proj_own) + kron(id, proj_other);
        }
    }
}

Mat2 WavePlateSequence::product() const {
    Mat2 acc = Mat2::Identity();
    for (const auto& e : elements) acc = e.pol_matrix() * acc;
    return std::polar(1.0, global_phase) * acc;
}

SprSynthesis synthesize_spr(const Mat2& target) {
    if (!is_unitary(target, 1e-10))
        throw Error(Errc::not_unitary, "synthesis target not unitary within 1e-10");

    // target = e^{i gamma} U(xi, iota, theta); det U = -1 fixes the phase.
    cx det = target(0, 0) * target(1, 1) - target(0, 1) * target(1, 0);
    double gamma = 0.5 * std::arg(-det);
    Mat2 u = std::polar(1.0, -gamma) * target;

    SprParams p;
    p.theta = std::atan2(std::abs(u(1, 0)), std::abs(u(0, 0)));
    const double cost = std::cos(p.theta);
    const double sint = std::sin(p.theta);
    p.xi = cost > 1e-9 ? wrap_phase(-std::arg(u(0, 0))) : 0.0;
    p.iota = sint > 1e-9 ? wrap_phase(std::arg(u(1, 0))) : 0.0;

    SprSynthesis out;
    out.params = p;
    out.global_phase = wrap_phase(gamma);

    // U = e^{-i xi} diag(1, e^{i(xi+iota)}) HWP(theta/2) diag(1, e^{i(xi-iota)})
    WavePlateSequence seq;
    seq.elements = {
        OpticalElement::phase_shifter(wrap_phase(p.xi - p.iota), OpticalElement::Component::v),
        OpticalElement::hwp(p.theta / 2),
        OpticalElement::phase_shifter(wrap_phase(p.xi + p.iota), OpticalElement::Component::v),
    };
    seq.global_phase = wrap_phase(gamma - p.xi);
    seq.target = target;
    out.sequence = seq;
    return out;
}

}  // namespace entconc
