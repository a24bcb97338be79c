#include "entconc/concentration.hpp"

#include "entconc/tomography.hpp"

#include <cmath>

namespace entconc {

namespace {

ConcentrationOutcome make_outcome(double probability, const PostSelectedResult& final_branch,
                                  const DensityMatrix4& input) {
    ConcentrationOutcome out;
    out.success_probability = probability;
    out.concurrence_before = concurrence(input);
    out.eof_before = concurrence_to_eof(out.concurrence_before);
    out.empty = final_branch.empty || probability < kZeroBranchTol;
    if (out.empty) {
        out.output_state = DensityMatrix4{Mat4::Zero()};
        return out;
    }
    out.output_state = final_branch.state;
    out.concurrence_after = concurrence(out.output_state);
    out.eof_after = concurrence_to_eof(out.concurrence_after);
    return out;
}

Mat2 boost_filter(const Eigen::Vector3d& direction, double eps) {
    // U diag(1, eps) U^dagger with U sigma_z U^dagger = direction . sigma:
    // the Lorentz image is a boost that expands the null ray e0 + direction.
    const double polar = std::acos(std::clamp(direction(2), -1.0, 1.0));
    const double azimuth = std::atan2(direction(1), direction(0));
    Mat2 u;
    u << std::cos(polar / 2), -std::polar(1.0, -azimuth) * std::sin(polar / 2),
        std::polar(1.0, azimuth) * std::sin(polar / 2), std::cos(polar / 2);
    Mat2 d = Mat2::Zero();
    d(0, 0) = 1.0;
    d(1, 1) = eps;
    return u * d * u.adjoint();
}

double kraus_probability(const ConcentrationPlan& plan, const DensityMatrix4& rho) {
    Mat4 f = plan.joint_filter();
    return (f * rho.matrix * f.adjoint()).trace().real();
}

}  // namespace

ArmPlan identity_arm_plan() { return ArmPlan{}; }

ArmPlan arm_plan_from_filter(const Mat2& filter) {
    Eigen::JacobiSVD<Mat2> svd(filter, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double s0 = svd.singularValues()(0);
    const double s1 = svd.singularValues()(1);
    if (s0 > 1.0 + kStructTol)
        throw Error(Errc::out_of_range, "filter singular value exceeds 1, not a POVM branch");

    ArmPlan arm;
    arm.filter = filter;
    arm.povm.theta = std::acos(std::clamp(s0, 0.0, 1.0));
    arm.povm.vartheta = std::acos(std::clamp(s1, 0.0, 1.0));
    arm.povm.post_unitary = svd.matrixU();
    arm.povm.pre_unitary = Mat2(svd.matrixV().adjoint());
    return arm;
}

std::map<std::string, SprSynthesis> ConcentrationPlan::spr_settings() const {
    std::map<std::string, SprSynthesis> out;
    auto fill = [&out](const std::string& label, const ArmPlan& arm) {
        const Mat2 id = Mat2::Identity();
        out[label + "1"] = synthesize_spr(arm.povm.pre_unitary.value_or(id));
        out[label + "2"] = synthesize_spr(ry(-2 * arm.povm.theta));
        out[label + "3"] = synthesize_spr(ry(2 * arm.povm.vartheta));
        out[label + "4"] = synthesize_spr(arm.povm.post_unitary.value_or(id));
    };
    fill("A", arm_a);
    fill("B", arm_b);
    return out;
}

Mat4 ConcentrationPlan::joint_filter() const { return kron(arm_a.filter, arm_b.filter); }

ConcentrationPlan plan_pure(const PureConcentrationSpec& spec) {
    if (!(spec.alpha >= 0.0) || !(spec.beta <= M_PI / 4 + kStructTol) ||
        !(spec.alpha <= spec.beta + kStructTol))
        throw Error(Errc::invalid_angles, "need 0 <= alpha <= beta <= pi/4");

    double omega = 0.0;
    double probability = 1.0;
    if (spec.beta > kStructTol) {
        const double ratio = std::clamp(std::tan(spec.alpha) / std::tan(spec.beta), 0.0, 1.0);
        omega = std::acos(ratio);
        const double sb = std::sin(spec.beta);
        probability = (std::sin(spec.alpha) * std::sin(spec.alpha)) / (sb * sb);
    }

    ConcentrationPlan plan;
    plan.arm_a.povm.theta = omega;
    plan.arm_a.povm.vartheta = 0.0;
    plan.arm_a.filter = plan.arm_a.povm.diag_m1();
    plan.arm_b = identity_arm_plan();
    plan.predicted_success_probability = probability;
    plan.target = PureState2Q::schmidt(spec.beta);
    return plan;
}

ConcentrationOutcome execute_plan(const ConcentrationPlan& plan, const PureState2Q& input) {
    input.require_normalized();
    Vec8 after_a = simulate_netlist(mz_povm_netlist(plan.arm_a.povm, Arm::A), input);
    PostSelectedResult branch_a = postselect_location(after_a, 0);
    if (branch_a.empty) return make_outcome(0.0, branch_a, input.to_density());

    Vec8 after_b = simulate_netlist(mz_povm_netlist(plan.arm_b.povm, Arm::B), *branch_a.pure);
    PostSelectedResult branch_b = postselect_location(after_b, 0);
    return make_outcome(branch_a.probability * branch_b.probability, branch_b,
                        input.to_density());
}

ConcentrationOutcome execute_plan(const ConcentrationPlan& plan, const DensityMatrix4& input) {
    Mat8 after_a = simulate_netlist(mz_povm_netlist(plan.arm_a.povm, Arm::A), input);
    PostSelectedResult branch_a = postselect_location(after_a, 0);
    if (branch_a.empty) return make_outcome(0.0, branch_a, input);

    Mat8 after_b = simulate_netlist(mz_povm_netlist(plan.arm_b.povm, Arm::B), branch_a.state);
    PostSelectedResult branch_b = postselect_location(after_b, 0);
    return make_outcome(branch_a.probability * branch_b.probability, branch_b, input);
}

ConcentrationOutcome execute_plan_kraus(const ConcentrationPlan& plan, const PureState2Q& input) {
    input.require_normalized();
    Vec4 filtered = plan.joint_filter() * input.amplitudes;
    const double p = filtered.squaredNorm();
    PostSelectedResult branch;
    branch.probability = p;
    branch.empty = p < kZeroBranchTol;
    if (!branch.empty) {
        branch.state = DensityMatrix4{filtered * filtered.adjoint() / p};
        branch.pure = PureState2Q{filtered / std::sqrt(p)};
    }
    return make_outcome(p, branch, input.to_density());
}

ConcentrationOutcome execute_plan_kraus(const ConcentrationPlan& plan,
                                        const DensityMatrix4& input) {
    if (!input.is_unit_trace()) throw Error(Errc::not_normalized, "input trace differs from 1");
    Mat4 f = plan.joint_filter();
    Mat4 filtered = f * input.matrix * f.adjoint();
    const double p = filtered.trace().real();
    PostSelectedResult branch;
    branch.probability = p;
    branch.empty = p < kZeroBranchTol;
    if (!branch.empty) branch.state = DensityMatrix4{filtered / p};
    return make_outcome(p, branch, input);
}

ConcentrationPlan plan_mixed(const DensityMatrix4& rho) {
    rho.require_state();
    LorentzNormalForm nf = lorentz_normal_form(density_to_rmatrix(rho));
    if (!nf.diagonalizable) {
        // Jordan-type states only admit the singular family; hand back its
        // geometric midpoint as a usable trade-off.
        auto family = quasi_distill(rho);
        return family[family.size() / 2];
    }

    auto filter_for = [](const RMat4& lorentz) {
        Mat2 adjoint_filter = sl2_from_lorentz(RMat4(lorentz.transpose()));
        Mat2 f = adjoint_filter.adjoint();
        Eigen::JacobiSVD<Mat2> svd(f);
        return Mat2(f / svd.singularValues()(0));
    };

    ConcentrationPlan plan;
    plan.arm_a = arm_plan_from_filter(filter_for(nf.L_A));
    plan.arm_b = arm_plan_from_filter(filter_for(nf.L_B));
    plan.predicted_success_probability = kraus_probability(plan, rho);
    return plan;
}

std::vector<ConcentrationPlan> quasi_distill(const DensityMatrix4& rho, double eps_min,
                                             int points) {
    if (!(eps_min > 0.0 && eps_min < 1.0) || points < 2)
        throw Error(Errc::out_of_range, "need 0 < eps_min < 1 and at least two grid points");
    rho.require_state();
    RMatrix R = density_to_rmatrix(rho);
    if (lorentz_normal_form(R).diagonalizable)
        throw Error(Errc::not_applicable, "state is Lorentz-diagonalizable; use plan_mixed");

    DefectDirections dirs = defect_directions(R);
    if (!dirs.found)
        throw Error(Errc::protocol_failed, "failed to locate the defect ray");

    std::vector<ConcentrationPlan> family;
    family.reserve(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
        const double eps = std::exp(std::log(eps_min) * k / (points - 1));
        ConcentrationPlan plan;
        plan.arm_a = arm_plan_from_filter(boost_filter(dirs.v_a, eps));
        plan.arm_b = arm_plan_from_filter(boost_filter(dirs.v_b, eps));
        plan.predicted_success_probability = kraus_probability(plan, rho);
        family.push_back(std::move(plan));
    }
    return family;
}

Mat4 vbs_transmission_matrix(const VbsParams& v) {
    Mat2 a = Mat2::Zero(), b = Mat2::Zero();
    a(0, 0) = v.eta_ha;
    a(1, 1) = v.eta_va;
    b(0, 0) = v.eta_hb;
    b(1, 1) = v.eta_vb;
    return kron(a, b);
}

ConcentrationPlan vbs_to_plan(const VbsParams& v) {
    for (double eta : {v.eta_ha, v.eta_va, v.eta_hb, v.eta_vb})
        if (!(eta >= 0.0 && eta <= 1.0))
            throw Error(Errc::out_of_range, "transmissions must lie in [0, 1]");

    auto diag_arm = [](double eta_h, double eta_v) {
        ArmPlan arm;
        arm.povm.theta = std::acos(std::clamp(eta_h, 0.0, 1.0));
        arm.povm.vartheta = std::acos(std::clamp(eta_v, 0.0, 1.0));
        arm.filter = arm.povm.diag_m1();
        return arm;
    };

    ConcentrationPlan plan;
    plan.arm_a = diag_arm(v.eta_ha, v.eta_va);
    plan.arm_b = diag_arm(v.eta_hb, v.eta_vb);
    return plan;
}

}  // namespace entconc
