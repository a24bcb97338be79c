#pragma once

#include "entconc/optical.hpp"

#include <array>
#include <optional>

namespace entconc {

// Canonical two-outcome POVM M1 = diag(cos theta, cos vartheta),
// M2 = diag(sin theta, sin vartheta), optionally dressed with unitaries:
// the implemented branch operators are K1 = post * M1 * pre, K2 = M2 * pre.
// Completeness K1'K1 + K2'K2 = I holds identically.
struct PovmPair {
    double theta = 0.0;
    double vartheta = 0.0;
    std::optional<Mat2> pre_unitary;
    std::optional<Mat2> post_unitary;

    Mat2 diag_m1() const;
    Mat2 diag_m2() const;
    Mat2 kraus1() const;
    Mat2 kraus2() const;
    double completeness_residual() const;
};

// Unitary dilation of the POVM onto polarization (x) location, basis
// {|0P 0L>, |0P 1L>, |1P 0L>, |1P 1L>}: block form
// diag(R_y(-2 theta), R_y(-2 vartheta)), together with its five-gate
// realization V1 V2 V3 V2 V1 where V1 = location-controlled polarization
// NOT, V2 = PBS, V3 applies R_y(-2 theta) in path 0 and R_y(2 vartheta)
// in path 1. `gates` is stored in application order (first applied first).
struct DilationCircuit {
    Mat4 dilation_unitary = Mat4::Identity();
    std::array<Mat4, 5> gates;

    Mat4 gate_product() const;
};

DilationCircuit build_dilation(const PovmPair& povm);

// One photon's optical train: ordered elements acting on the polarization
// (x) location space of the photon in `arm`; elements are applied front to
// back.
struct OpticalNetlist {
    Arm arm = Arm::A;
    std::vector<OpticalElement> elements;

    Mat4 total_unitary() const;
};

// The Mach-Zehnder interferometer realizing the POVM on one arm, with the
// pre/post unitaries synthesized as wave-plate sequences in path 0.
OpticalNetlist mz_povm_netlist(const PovmPair& povm, Arm arm);

struct PostSelectedResult {
    int location_branch = 0;
    double probability = 0.0;
    bool empty = false;  // branch probability below 1e-14, state not renormalized
    DensityMatrix4 state;
    std::optional<PureState2Q> pure;
};

// Joint two-photon (x) one-location space, basis index 4*pA + 2*pB + loc.
Vec8 inject_with_location0(const PureState2Q& psi);
Mat8 inject_with_location0(const DensityMatrix4& rho);
Mat8 lift_polloc_to_joint(const Mat4& polloc, Arm arm);

Vec8 simulate_netlist(const OpticalNetlist& netlist, const Vec8& input);
Mat8 simulate_netlist(const OpticalNetlist& netlist, const Mat8& input);
Vec8 simulate_netlist(const OpticalNetlist& netlist, const PureState2Q& input);
Mat8 simulate_netlist(const OpticalNetlist& netlist, const DensityMatrix4& input);

PostSelectedResult postselect_location(const Vec8& joint, int branch);
PostSelectedResult postselect_location(const Mat8& joint, int branch);

// Direct Kraus evaluation of the POVM on one arm: branch i has probability
// <Ki' Ki> and conditional state Ki rho Ki' / p.
std::array<PostSelectedResult, 2> apply_povm(const PovmPair& povm, const PureState2Q& state,
                                             Arm arm);
std::array<PostSelectedResult, 2> apply_povm(const PovmPair& povm, const DensityMatrix4& state,
                                             Arm arm);

// Same POVM evaluated by full 8-dimensional interferometer simulation plus
// location measurement; kept as an independent route for cross-checks.
std::array<PostSelectedResult, 2> apply_povm_via_circuit(const PovmPair& povm,
                                                         const PureState2Q& state, Arm arm);
std::array<PostSelectedResult, 2> apply_povm_via_circuit(const PovmPair& povm,
                                                         const DensityMatrix4& state, Arm arm);

}  // namespace entconc
