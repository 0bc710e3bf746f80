#pragma once

#include <Eigen/Dense>

#include "d2p/types.hpp"

namespace d2p {

// Pinhole camera. pose maps camera coordinates into the robot base frame:
// x_world = rotation * x_camera + translation.
struct CameraModel {
  double fx = 500.0;
  double fy = 500.0;
  double cx = 320.0;
  double cy = 320.0;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  // Throws SchemaError on non-positive focal lengths or a rotation that is
  // not orthonormal/right-handed within 1e-9.
  void validate() const;

  bool operator==(const CameraModel& other) const;
};

// Horizontal work surface z = height_m with rectangular bounds.
struct TablePlane {
  double height_m = 0.80;
  double x_min = 0.2;
  double x_max = 0.9;
  double y_min = -0.5;
  double y_max = 0.5;

  void validate() const;

  friend bool operator==(const TablePlane&, const TablePlane&) = default;
};

// Camera placed `height_above_table` over the table at (x, y), pitched
// `pitch_down_rad` below horizontal toward +x. Image u axis runs along -y.
CameraModel make_overhead_camera(const TablePlane& table, double x, double y,
                                 double height_above_table, double pitch_down_rad,
                                 double fx = 500.0, double fy = 500.0,
                                 double cx = 320.0, double cy = 320.0);

// The stock setup: 640x640 virtual image, camera 0.45 m above the table at
// the head position (0, 0), pitched 60 degrees down toward +x.
CameraModel default_camera(const TablePlane& table);
TablePlane default_table();

// Pinhole projection. Throws BehindCamera when the point has non-positive
// depth in the camera frame.
Pixel project(const Point3& p, const CameraModel& cam);

// Intersects the viewing ray of `px` with the table plane. The returned
// point's z equals table.height_m exactly. Throws NoIntersection when the
// ray is parallel to the plane and IntersectionBehindCamera when the hit is
// at negative ray length.
Point3 backproject(const Pixel& px, const CameraModel& cam, const TablePlane& table);

// True iff x/y are within the table bounds +- tol and |z - height| <= tol.
// Bounds are closed: a point exactly on the edge passes with tol = 0.
bool in_bounds(const Point3& p, const TablePlane& table, double tol);

}  // namespace d2p
