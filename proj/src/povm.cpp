#include "entconc/povm.hpp"

#include <cmath>

namespace entconc {

namespace {

Mat2 proj2(int i) {
    Mat2 p = Mat2::Zero();
    p(i, i) = 1;
    return p;
}

void append_sequence(std::vector<OpticalElement>& out, const WavePlateSequence& seq, int path) {
    for (OpticalElement e : seq.elements) {
        e.path = path;
        out.push_back(e);
    }
    if (std::abs(seq.global_phase) > 0.0) {
        // A phase common to both polarization components of one path.
        out.push_back(OpticalElement::phase_shifter(seq.global_phase,
                                                    OpticalElement::Component::h, path));
        out.push_back(OpticalElement::phase_shifter(seq.global_phase,
                                                    OpticalElement::Component::v, path));
    }
}

void append_unitary(std::vector<OpticalElement>& out, const Mat2& u, int path) {
    append_sequence(out, synthesize_spr(u).sequence, path);
}

PostSelectedResult make_result(int branch, double probability, const Mat4& unnormalized,
                               const Vec4* amplitudes) {
    PostSelectedResult r;
    r.location_branch = branch;
    r.probability = probability;
    if (probability < kZeroBranchTol) {
        r.empty = true;
        r.state = DensityMatrix4{Mat4::Zero()};
        return r;
    }
    r.state = DensityMatrix4{unnormalized / probability};
    if (amplitudes) r.pure = PureState2Q{*amplitudes / std::sqrt(probability)};
    return r;
}

std::array<PostSelectedResult, 2> kraus_branches(const Mat4& k1, const Mat4& k2,
                                                 const Vec4& psi) {
    Vec4 a1 = k1 * psi;
    Vec4 a2 = k2 * psi;
    double p1 = a1.squaredNorm();
    double p2 = a2.squaredNorm();
    return {make_result(0, p1, a1 * a1.adjoint(), &a1), make_result(1, p2, a2 * a2.adjoint(), &a2)};
}

std::array<PostSelectedResult, 2> kraus_branches(const Mat4& k1, const Mat4& k2, const Mat4& rho) {
    Mat4 r1 = k1 * rho * k1.adjoint();
    Mat4 r2 = k2 * rho * k2.adjoint();
    double p1 = r1.trace().real();
    double p2 = r2.trace().real();
    return {make_result(0, p1, r1, nullptr), make_result(1, p2, r2, nullptr)};
}

Mat4 lift_to_pair(const Mat2& m, Arm arm) {
    return arm == Arm::A ? kron(m, Mat2::Identity()) : kron(Mat2::Identity(), m);
}

}  // namespace

Mat2 PovmPair::diag_m1() const {
    Mat2 m = Mat2::Zero();
    m(0, 0) = std::cos(theta);
    m(1, 1) = std::cos(vartheta);
    return m;
}

Mat2 PovmPair::diag_m2() const {
    Mat2 m = Mat2::Zero();
    m(0, 0) = std::sin(theta);
    m(1, 1) = std::sin(vartheta);
    return m;
}

Mat2 PovmPair::kraus1() const {
    Mat2 m = diag_m1();
    if (pre_unitary) m = m * (*pre_unitary);
    if (post_unitary) m = (*post_unitary) * m;
    return m;
}

Mat2 PovmPair::kraus2() const {
    Mat2 m = diag_m2();
    if (pre_unitary) m = m * (*pre_unitary);
    return m;
}

double PovmPair::completeness_residual() const {
    Mat2 sum = kraus1().adjoint() * kraus1() + kraus2().adjoint() * kraus2();
    return max_abs_diff(sum, Mat2::Identity());
}

Mat4 DilationCircuit::gate_product() const {
    Mat4 acc = Mat4::Identity();
    for (const auto& g : gates) acc = g * acc;
    return acc;
}

DilationCircuit build_dilation(const PovmPair& povm) {
    DilationCircuit c;
    // Polarization is the left tensor factor, so the block form conditions
    // on polarization and rotates the location qubit.
    c.dilation_unitary = kron(proj2(0), ry(-2 * povm.theta)) +
                         kron(proj2(1), ry(-2 * povm.vartheta));

    Mat4 v1 = kron(pauli(1), proj2(1)) + kron(Mat2::Identity(), proj2(0));
    Mat4 v2 = OpticalElement::pbs().polloc_matrix();
    Mat4 v3 = kron(ry(-2 * povm.theta), proj2(0)) + kron(ry(2 * povm.vartheta), proj2(1));
    c.gates = {v1, v2, v3, v2, v1};

    if (max_abs_diff(c.gate_product(), c.dilation_unitary) > kStructTol)
        throw Error(Errc::protocol_failed, "dilation gate product deviates from block form");
    return c;
}

OpticalNetlist mz_povm_netlist(const PovmPair& povm, Arm arm) {
    OpticalNetlist net;
    net.arm = arm;
    if (povm.pre_unitary) append_unitary(net.elements, *povm.pre_unitary, 0);

    net.elements.push_back(OpticalElement::hwp(M_PI / 4, 1));  // V1
    net.elements.push_back(OpticalElement::pbs());             // V2
    append_unitary(net.elements, ry(-2 * povm.theta), 0);      // V3, path 0
    append_unitary(net.elements, ry(2 * povm.vartheta), 1);    // V3, path 1
    net.elements.push_back(OpticalElement::pbs());             // V2
    net.elements.push_back(OpticalElement::hwp(M_PI / 4, 1));  // V1

    if (povm.post_unitary) append_unitary(net.elements, *povm.post_unitary, 0);
    return net;
}

Mat4 OpticalNetlist::total_unitary() const {
    Mat4 acc = Mat4::Identity();
    for (const auto& e : elements) acc = e.polloc_matrix() * acc;
    return acc;
}

Vec8 inject_with_location0(const PureState2Q& psi) {
    Vec8 out = Vec8::Zero();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) out(4 * a + 2 * b) = psi.amplitudes(2 * a + b);
    return out;
}

Mat8 inject_with_location0(const DensityMatrix4& rho) {
    Mat8 out = Mat8::Zero();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            int a = i / 2, b = i % 2, ap = j / 2, bp = j % 2;
            out(4 * a + 2 * b, 4 * ap + 2 * bp) = rho.matrix(i, j);
        }
    return out;
}

Mat8 lift_polloc_to_joint(const Mat4& polloc, Arm arm) {
    Mat8 out = Mat8::Zero();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int l = 0; l < 2; ++l)
                for (int ap = 0; ap < 2; ++ap)
                    for (int bp = 0; bp < 2; ++bp)
                        for (int lp = 0; lp < 2; ++lp) {
                            int row = 4 * a + 2 * b + l;
                            int col = 4 * ap + 2 * bp + lp;
                            if (arm == Arm::A && b == bp)
                                out(row, col) = polloc(2 * a + l, 2 * ap + lp);
                            else if (arm == Arm::B && a == ap)
                                out(row, col) = polloc(2 * b + l, 2 * bp + lp);
                        }
    return out;
}

Vec8 simulate_netlist(const OpticalNetlist& netlist, const Vec8& input) {
    Vec8 state = input;
    for (const auto& e : netlist.elements)
        state = lift_polloc_to_joint(e.polloc_matrix(), netlist.arm) * state;
    return state;
}

Mat8 simulate_netlist(const OpticalNetlist& netlist, const Mat8& input) {
    Mat8 u = lift_polloc_to_joint(netlist.total_unitary(), netlist.arm);
    return u * input * u.adjoint();
}

Vec8 simulate_netlist(const OpticalNetlist& netlist, const PureState2Q& input) {
    input.require_normalized();
    return simulate_netlist(netlist, inject_with_location0(input));
}

Mat8 simulate_netlist(const OpticalNetlist& netlist, const DensityMatrix4& input) {
    if (!input.is_unit_trace()) throw Error(Errc::not_normalized, "input trace differs from 1");
    return simulate_netlist(netlist, inject_with_location0(input));
}

PostSelectedResult postselect_location(const Vec8& joint, int branch) {
    Vec4 amp;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) amp(2 * a + b) = joint(4 * a + 2 * b + branch);
    double p = amp.squaredNorm();
    return make_result(branch, p, amp * amp.adjoint(), &amp);
}

PostSelectedResult postselect_location(const Mat8& joint, int branch) {
    Mat4 block;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            int a = i / 2, b = i % 2, ap = j / 2, bp = j % 2;
            block(i, j) = joint(4 * a + 2 * b + branch, 4 * ap + 2 * bp + branch);
        }
    double p = block.trace().real();
    return make_result(branch, p, block, nullptr);
}

std::array<PostSelectedResult, 2> apply_povm(const PovmPair& povm, const PureState2Q& state,
                                             Arm arm) {
    state.require_normalized();
    return kraus_branches(lift_to_pair(povm.kraus1(), arm), lift_to_pair(povm.kraus2(), arm),
                          state.amplitudes);
}

std::array<PostSelectedResult, 2> apply_povm(const PovmPair& povm, const DensityMatrix4& state,
                                             Arm arm) {
    if (!state.is_unit_trace()) throw Error(Errc::not_normalized, "input trace differs from 1");
    return kraus_branches(lift_to_pair(povm.kraus1(), arm), lift_to_pair(povm.kraus2(), arm),
                          state.matrix);
}

std::array<PostSelectedResult, 2> apply_povm_via_circuit(const PovmPair& povm,
                                                         const PureState2Q& state, Arm arm) {
    Vec8 out = simulate_netlist(mz_povm_netlist(povm, arm), state);
    return {postselect_location(out, 0), postselect_location(out, 1)};
}

std::array<PostSelectedResult, 2> apply_povm_via_circuit(const PovmPair& povm,
                                                         const DensityMatrix4& state, Arm arm) {
    Mat8 out = simulate_netlist(mz_povm_netlist(povm, arm), state);
    return {postselect_location(out, 0), postselect_location(out, 1)};
}

}  // namespace entconc
