#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace trunkload {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

inline Mat3 skew(const Vec3& v) {
    Mat3 m;
    m << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
         -v.y(), v.x(), 0.0;
    return m;
}

/// Reflection through the sagittal (x = 0) plane applied to a point or
/// other polar vector.
inline Vec3 mirror_point(const Vec3& p) { return {-p.x(), p.y(), p.z()}; }

/// Reflection of an axial vector (rotation axis, moment): det(M) * M * a.
inline Vec3 mirror_axial(const Vec3& a) { return {a.x(), -a.y(), -a.z()}; }

// Spatial (Plücker) vectors in ground coordinates, angular part first.
inline Vec6 motion_cross(const Vec6& v, const Vec6& m) {
    const Vec3 w = v.head<3>(), vo = v.tail<3>();
    const Vec3 mw = m.head<3>(), mv = m.tail<3>();
    Vec6 out;
    out << w.cross(mw), w.cross(mv) + vo.cross(mw);
    return out;
}

inline Vec6 force_cross(const Vec6& v, const Vec6& f) {
    const Vec3 w = v.head<3>(), vo = v.tail<3>();
    const Vec3 n = f.head<3>(), lin = f.tail<3>();
    Vec6 out;
    out << w.cross(n) + vo.cross(lin), w.cross(lin);
    return out;
}

/// Spatial inertia about the ground origin for a body of mass m whose COM is
/// at c with rotational inertia ic about the COM (all in ground axes).
inline Mat6 spatial_inertia(double m, const Vec3& c, const Mat3& ic) {
    const Mat3 cx = skew(c);
    Mat6 out;
    out.topLeftCorner<3, 3>() = ic + m * cx * cx.transpose();
    out.topRightCorner<3, 3>() = m * cx;
    out.bottomLeftCorner<3, 3>() = m * cx.transpose();
    out.bottomRightCorner<3, 3>() = m * Mat3::Identity();
    return out;
}

}  // namespace trunkload
