#pragma once

#include "entconc/lorentz.hpp"
#include "entconc/povm.hpp"

#include <map>
#include <string>

namespace entconc {

// Schmidt angles of source and target, 0 <= alpha <= beta <= pi/4.
struct PureConcentrationSpec {
    double alpha = 0.0;
    double beta = 0.0;
};

// One arm's local operation: filter = post * diag(cos theta, cos delta) * pre,
// executed as the Mach-Zehnder POVM with flanking wave-plate rotations.
struct ArmPlan {
    Mat2 filter = Mat2::Identity();
    PovmPair povm;

    double theta() const { return povm.theta; }
    double delta() const { return povm.vartheta; }
};

ArmPlan identity_arm_plan();
// Singular value decomposition of a physical filter (singular values in [0, 1])
// into the (post, diag, pre) form.
ArmPlan arm_plan_from_filter(const Mat2& filter);

struct ConcentrationPlan {
    ArmPlan arm_a;
    ArmPlan arm_b;
    std::optional<double> predicted_success_probability;
    std::optional<PureState2Q> target;

    // Wave-plate settings keyed A1..A4, B1..B4: slot 1 is the input-side
    // unitary, slots 2/3 the interferometer path-0/path-1 rotations
    // R_y(-2 theta) / R_y(2 delta), slot 4 the output-side unitary.
    std::map<std::string, SprSynthesis> spr_settings() const;
    Mat4 joint_filter() const;
};

ConcentrationPlan plan_pure(const PureConcentrationSpec& spec);

struct ConcentrationOutcome {
    double success_probability = 0.0;
    bool empty = false;
    DensityMatrix4 output_state;
    double concurrence_before = 0.0;
    double concurrence_after = 0.0;
    double eof_before = 0.0;
    double eof_after = 0.0;
};

// Full two-arm interferometer simulation, post-selecting location 0 on both
// arms.
ConcentrationOutcome execute_plan(const ConcentrationPlan& plan, const PureState2Q& input);
ConcentrationOutcome execute_plan(const ConcentrationPlan& plan, const DensityMatrix4& input);

// Direct filter algebra (F_A x F_B), kept as an independent route.
ConcentrationOutcome execute_plan_kraus(const ConcentrationPlan& plan, const PureState2Q& input);
ConcentrationOutcome execute_plan_kraus(const ConcentrationPlan& plan,
                                        const DensityMatrix4& input);

// Optimal local filtering from the Lorentz normal form; falls back to a
// mid-strength quasi-distillation plan when R is not diagonalizable.
ConcentrationPlan plan_mixed(const DensityMatrix4& rho);

// One-parameter plan family for states whose R is not Lorentz-diagonalizable:
// boosts aimed at the defect ray with strength parameter eps on a geometric
// grid from 1 (identity) down to eps_min. Output entanglement grows and
// success probability falls toward the singular end.
std::vector<ConcentrationPlan> quasi_distill(const DensityMatrix4& rho, double eps_min = 1e-3,
                                             int points = 20);

// Variable-beam-splitter transmissions, all in [0, 1].
struct VbsParams {
    double eta_ha = 1.0;
    double eta_va = 1.0;
    double eta_hb = 1.0;
    double eta_vb = 1.0;
};

// diag(hA hB, hA vB, vA hB, vA vB)
Mat4 vbs_transmission_matrix(const VbsParams& v);
ConcentrationPlan vbs_to_plan(const VbsParams& v);

}  // namespace entconc
