#include "trunkload/kinematics.hpp"

#include <sstream>

namespace trunkload {

Posture Posture::zero(const Model& model) {
    const auto n = static_cast<Eigen::Index>(model.coordinate_count());
    return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
}

Posture Posture::at(Eigen::VectorXd q) {
    const auto n = q.size();
    return {std::move(q), Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
}

void check_posture_dimension(const Model& model, const Posture& posture) {
    const auto n = static_cast<Eigen::Index>(model.coordinate_count());
    if (posture.q.size() != n || posture.qdot.size() != n || posture.qddot.size() != n) {
        std::ostringstream msg;
        msg << "posture dimension mismatch: model has " << n << " coordinates, posture has q="
            << posture.q.size() << " qdot=" << posture.qdot.size() << " qddot=" << posture.qddot.size();
        throw DimensionError(msg.str());
    }
}

FramePlacement forward_kinematics(const Model& model, const Eigen::VectorXd& q) {
    if (q.size() != static_cast<Eigen::Index>(model.coordinate_count())) {
        throw DimensionError("posture dimension mismatch: expected " + std::to_string(model.coordinate_count()) +
                             " coordinates, got " + std::to_string(q.size()));
    }
    FramePlacement out;
    out.segments.resize(model.segments.size());
    for (auto j : model.joint_order) {
        const auto& joint = model.joints[j];
        const auto& parent = out.segments[model.joint_parent_segment[j]];
        auto& child = out.segments[model.joint_child_segment[j]];
        const auto first = model.joint_first_coordinate[j];

        Mat3 local = Mat3::Identity();
        Vec3 slide = Vec3::Zero();
        if (joint.kind == JointKind::revolute) {
            for (std::size_t k = 0; k < joint.axes.size(); ++k) {
                local = local * Eigen::AngleAxisd(q[static_cast<Eigen::Index>(first + k)], joint.axes[k]).toRotationMatrix();
            }
        } else if (joint.kind == JointKind::prismatic) {
            for (std::size_t k = 0; k < joint.axes.size(); ++k) slide += q[static_cast<Eigen::Index>(first + k)] * joint.axes[k];
        }
        child.rotation = parent.rotation * local;
        child.translation = parent.apply(joint.anchor_parent + slide) - child.rotation * joint.anchor_child;
    }
    return out;
}

FramePlacement forward_kinematics(const Model& model, const Posture& posture) {
    check_posture_dimension(model, posture);
    return forward_kinematics(model, posture.q);
}

double muscle_length(const Model& model, const FramePlacement& frames, std::size_t muscle) {
    const auto& path = model.muscles.at(muscle).path;
    double length = 0.0;
    Vec3 prev = frames[model.segment_index(path.front().segment)].apply(path.front().point);
    for (std::size_t k = 1; k < path.size(); ++k) {
        const Vec3 cur = frames[model.segment_index(path[k].segment)].apply(path[k].point);
        length += (cur - prev).norm();
        prev = cur;
    }
    return length;
}

double muscle_length(const Model& model, const Posture& posture, std::string_view muscle) {
    const auto m = model.muscle_index(muscle);
    return muscle_length(model, forward_kinematics(model, posture), m);
}

double moment_arm(const Model& model, const Posture& posture, std::string_view muscle,
                  std::string_view coordinate) {
    const auto m = model.muscle_index(muscle);
    const auto c = static_cast<Eigen::Index>(model.coordinate_index(coordinate));
    check_posture_dimension(model, posture);
    Eigen::VectorXd q = posture.q;
    const double q0 = q[c];
    q[c] = q0 + kMomentArmStep;
    const double up = muscle_length(model, forward_kinematics(model, q), m);
    q[c] = q0 - kMomentArmStep;
    const double down = muscle_length(model, forward_kinematics(model, q), m);
    return -(up - down) / (2.0 * kMomentArmStep);
}

Eigen::MatrixXd moment_arm_matrix(const Model& model, const Posture& posture) {
    check_posture_dimension(model, posture);
    const auto nc = static_cast<Eigen::Index>(model.coordinate_count());
    const auto nm = static_cast<Eigen::Index>(model.muscles.size());
    Eigen::MatrixXd r(nc, nm);
    Eigen::VectorXd q = posture.q;
    for (Eigen::Index c = 0; c < nc; ++c) {
        const double q0 = q[c];
        q[c] = q0 + kMomentArmStep;
        const auto up = forward_kinematics(model, q);
        q[c] = q0 - kMomentArmStep;
        const auto down = forward_kinematics(model, q);
        q[c] = q0;
        for (Eigen::Index m = 0; m < nm; ++m) {
            const auto mi = static_cast<std::size_t>(m);
            r(c, m) = -(muscle_length(model, up, mi) - muscle_length(model, down, mi)) / (2.0 * kMomentArmStep);
        }
    }
    return r;
}

Vec3 site_position(const Model& model, const FramePlacement& frames, std::string_view site) {
    const auto& s = model.sites[model.site_index(site)];
    return frames[model.segment_index(s.segment)].apply(s.point);
}

std::vector<std::string> limit_warnings(const Model& model, const Posture& posture) {
    check_posture_dimension(model, posture);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < model.coordinate_count(); ++i) {
        const auto& c = model.coordinates[i];
        const double v = posture.q[static_cast<Eigen::Index>(i)];
        if (c.limits && (v < c.limits->min || v > c.limits->max)) {
            std::ostringstream msg;
            msg << "coordinate " << c.name << " = " << v << " outside [" << c.limits->min << ", " << c.limits->max << "]";
            out.push_back(msg.str());
        }
    }
    return out;
}

}  // namespace trunkload
