#include "trunkload/inverse_dynamics.hpp"

#include <vector>

namespace trunkload {

GeneralizedForces inverse_dynamics(const Model& model, const Posture& posture,
                                   std::span<const ExternalLoad> loads) {
    check_posture_dimension(model, posture);
    for (const auto& load : loads) {
        model.segment_index(load.segment);
        if (!load.force.allFinite() || !load.torque.allFinite() || !load.point.allFinite()) {
            throw ConfigError("non-finite external load on segment '" + load.segment + "'");
        }
    }

    const auto frames = forward_kinematics(model, posture.q);
    const auto nseg = model.segments.size();
    const auto ncoord = static_cast<Eigen::Index>(model.coordinate_count());

    // Spatial quantities in ground coordinates about the ground origin.
    // Gravity enters as an upward acceleration of the base.
    std::vector<Vec6> velocity(nseg, Vec6::Zero());
    std::vector<Vec6> accel(nseg, Vec6::Zero());
    std::vector<Vec6> wrench(nseg, Vec6::Zero());
    std::vector<Vec6> motion_axis(static_cast<std::size_t>(ncoord), Vec6::Zero());
    accel[0].tail<3>() = -model.gravity;

    for (auto j : model.joint_order) {
        const auto& joint = model.joints[j];
        const auto parent = model.joint_parent_segment[j];
        const auto child = model.joint_child_segment[j];
        const auto first = model.joint_first_coordinate[j];
        const Placement& pp = frames[parent];

        Vec6 v = velocity[parent];
        Vec6 a = accel[parent];
        const Vec3 anchor = pp.apply(joint.anchor_parent);
        Mat3 partial = pp.rotation;
        for (std::size_t k = 0; k < joint.axes.size() && joint.kind != JointKind::fixed; ++k) {
            const auto idx = static_cast<Eigen::Index>(first + k);
            Vec6 s;
            if (joint.kind == JointKind::revolute) {
                const Vec3 axis = partial * joint.axes[k];
                s << axis, anchor.cross(axis);
                partial = partial * Eigen::AngleAxisd(posture.q[idx], joint.axes[k]).toRotationMatrix();
            } else {
                s << Vec3::Zero(), pp.rotation * joint.axes[k];
            }
            motion_axis[static_cast<std::size_t>(idx)] = s;
            v += s * posture.qdot[idx];
            a += s * posture.qddot[idx] + motion_cross(v, s * posture.qdot[idx]);
        }
        velocity[child] = v;
        accel[child] = a;
    }

    for (std::size_t b = 1; b < nseg; ++b) {
        const auto& seg = model.segments[b];
        const Placement& p = frames[b];
        const Mat3 ic = p.rotation * seg.inertia * p.rotation.transpose();
        const Mat6 inertia = spatial_inertia(seg.mass, p.apply(seg.com), ic);
        wrench[b] = inertia * accel[b] + force_cross(velocity[b], inertia * velocity[b]);
    }

    for (const auto& load : loads) {
        const auto b = model.segment_index(load.segment);
        const Vec3 at = frames[b].apply(load.point);
        Vec6 f;
        f << at.cross(load.force) + load.torque, load.force;
        wrench[b] -= f;
    }

    GeneralizedForces out{Eigen::VectorXd::Zero(ncoord)};
    for (auto it = model.joint_order.rbegin(); it != model.joint_order.rend(); ++it) {
        const auto j = *it;
        const auto& joint = model.joints[j];
        const auto child = model.joint_child_segment[j];
        if (joint.kind != JointKind::fixed) {
            const auto first = model.joint_first_coordinate[j];
            for (std::size_t k = 0; k < joint.axes.size(); ++k) {
                out.tau[static_cast<Eigen::Index>(first + k)] = motion_axis[first + k].dot(wrench[child]);
            }
        }
        wrench[model.joint_parent_segment[j]] += wrench[child];
    }
    return out;
}

}  // namespace trunkload
