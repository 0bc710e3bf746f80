#include "d2p/geometry.hpp"

#include <cmath>
#include <numbers>

#include "d2p/errors.hpp"

namespace d2p {

void CameraModel::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) throw SchemaError("camera focal lengths must be positive");
  if (!std::isfinite(cx) || !std::isfinite(cy)) throw SchemaError("camera principal point not finite");
  if (!rotation.allFinite() || !translation.allFinite()) {
    throw SchemaError("camera pose not finite");
  }
  const Eigen::Matrix3d gram = rotation.transpose() * rotation;
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-9) {
    throw SchemaError("camera rotation is not orthonormal");
  }
  if (std::abs(rotation.determinant() - 1.0) > 1e-9) {
    throw SchemaError("camera rotation is not right-handed");
  }
}

bool CameraModel::operator==(const CameraModel& other) const {
  return fx == other.fx && fy == other.fy && cx == other.cx && cy == other.cy &&
         rotation == other.rotation && translation == other.translation;
}

void TablePlane::validate() const {
  if (!(x_min < x_max) || !(y_min < y_max)) throw SchemaError("table bounds are empty");
  if (!std::isfinite(height_m)) throw SchemaError("table height not finite");
}

CameraModel make_overhead_camera(const TablePlane& table, double x, double y,
                                 double height_above_table, double pitch_down_rad,
                                 double fx, double fy, double cx, double cy) {
  CameraModel cam;
  cam.fx = fx;
  cam.fy = fy;
  cam.cx = cx;
  cam.cy = cy;
  cam.translation = Eigen::Vector3d(x, y, table.height_m + height_above_table);

  // Camera z (forward) pitched down toward +x; x (image u) along -y so the
  // image is upright when looking across the table; y = z cross x.
  const Eigen::Vector3d forward(std::cos(pitch_down_rad), 0.0, -std::sin(pitch_down_rad));
  const Eigen::Vector3d right(0.0, -1.0, 0.0);
  const Eigen::Vector3d down = forward.cross(right);
  cam.rotation.col(0) = right;
  cam.rotation.col(1) = down;
  cam.rotation.col(2) = forward;
  cam.validate();
  return cam;
}

TablePlane default_table() { return TablePlane{}; }

CameraModel default_camera(const TablePlane& table) {
  return make_overhead_camera(table, 0.0, 0.0, 0.45, 60.0 * std::numbers::pi / 180.0);
}

Pixel project(const Point3& p, const CameraModel& cam) {
  const Eigen::Vector3d world(p.x, p.y, p.z);
  const Eigen::Vector3d local = cam.rotation.transpose() * (world - cam.translation);
  if (local.z() <= 0.0) throw BehindCamera("point has non-positive camera depth");
  return Pixel{cam.fx * local.x() / local.z() + cam.cx,
               cam.fy * local.y() / local.z() + cam.cy};
}

Point3 backproject(const Pixel& px, const CameraModel& cam, const TablePlane& table) {
  const Eigen::Vector3d dir_cam((px.u - cam.cx) / cam.fx, (px.v - cam.cy) / cam.fy, 1.0);
  const Eigen::Vector3d dir = cam.rotation * dir_cam;
  if (std::abs(dir.z()) < 1e-12) throw NoIntersection("viewing ray is parallel to the table");
  const double lambda = (table.height_m - cam.translation.z()) / dir.z();
  if (lambda <= 0.0) throw IntersectionBehindCamera("table plane is behind the camera");
  const Eigen::Vector3d hit = cam.translation + lambda * dir;
  // z is pinned analytically; the arithmetic above already guarantees it up
  // to rounding, the assignment makes it exact.
  return Point3{hit.x(), hit.y(), table.height_m};
}

bool in_bounds(const Point3& p, const TablePlane& table, double tol) {
  return p.x >= table.x_min - tol && p.x <= table.x_max + tol &&
         p.y >= table.y_min - tol && p.y <= table.y_max + tol &&
         std::abs(p.z - table.height_m) <= tol;
}

}  // namespace d2p
