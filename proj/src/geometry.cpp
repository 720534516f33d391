#include "sparsebev/geometry.hpp"

#include <cmath>

#include "sparsebev/tolerances.hpp"

namespace sparsebev {

Mat3 Mat3::mul(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
      r(i, j) = s;
    }
  }
  return r;
}

Mat3 Mat3::transpose() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
  return r;
}

double Mat3::det() const {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Mat3 rotation_z(double yaw) {
  double c = std::cos(yaw);
  double s = std::sin(yaw);
  Mat3 r;
  r.m = {c, -s, 0, s, c, 0, 0, 0, 1};
  return r;
}

bool RigidTransform::is_valid() const {
  Mat3 rtr = rotation.transpose().mul(rotation);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double want = i == j ? 1.0 : 0.0;
      if (std::abs(rtr(i, j) - want) > tol::kOrthonormal) return false;
    }
  }
  if (std::abs(rotation.det() - 1.0) > tol::kOrthonormal) return false;
  return std::isfinite(translation.x) && std::isfinite(translation.y) &&
         std::isfinite(translation.z);
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  return {a.rotation.mul(b.rotation), a.rotation.apply(b.translation) + a.translation};
}

RigidTransform invert(const RigidTransform& t) {
  Mat3 rt = t.rotation.transpose();
  return {rt, rt.apply(t.translation) * -1.0};
}

std::optional<PixelDepth> project_unbounded(const Vec3& p_ego, const CameraModel& cam) {
  Vec3 pc = invert(cam.cam_to_ego).apply(p_ego);
  if (pc.z <= 0.0) return std::nullopt;
  return PixelDepth{cam.fx * pc.x / pc.z + cam.cx, cam.fy * pc.y / pc.z + cam.cy, pc.z};
}

std::optional<PixelDepth> project(const Vec3& p_ego, const CameraModel& cam) {
  auto pd = project_unbounded(p_ego, cam);
  if (!pd) return std::nullopt;
  if (pd->u < 0.0 || pd->u >= cam.width || pd->v < 0.0 || pd->v >= cam.height)
    return std::nullopt;
  return pd;
}

Vec3 unproject(double u, double v, double depth, const CameraModel& cam) {
  Vec3 pc{(u - cam.cx) / cam.fx * depth, (v - cam.cy) / cam.fy * depth, depth};
  return cam.cam_to_ego.apply(pc);
}

GridSpec2D GridSpec2D::square(double range_m, double cell_size) {
  int n = static_cast<int>(std::ceil(2.0 * range_m / cell_size));
  return {-range_m, -range_m, cell_size, n, n};
}

std::optional<Cell2D> bev_cell_of(const Vec3& p, const GridSpec2D& grid) {
  int ix = static_cast<int>(std::floor((p.x - grid.origin_x) / grid.cell_size));
  int iy = static_cast<int>(std::floor((p.y - grid.origin_y) / grid.cell_size));
  if (ix < 0 || ix >= grid.nx || iy < 0 || iy >= grid.ny) return std::nullopt;
  return Cell2D{ix, iy};
}

std::optional<Cell3D> voxel_of(const Vec3& p, const VoxelSpec3D& spec) {
  int ix = static_cast<int>(std::floor((p.x - spec.origin.x) / spec.cell_x));
  int iy = static_cast<int>(std::floor((p.y - spec.origin.y) / spec.cell_y));
  int iz = static_cast<int>(std::floor((p.z - spec.origin.z) / spec.cell_z));
  if (ix < 0 || ix >= spec.nx || iy < 0 || iy >= spec.ny || iz < 0 || iz >= spec.nz)
    return std::nullopt;
  return Cell3D{ix, iy, iz};
}

}  // namespace sparsebev
