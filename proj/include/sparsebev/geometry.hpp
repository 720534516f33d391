#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>

namespace sparsebev {

// Frame conventions used throughout:
//   ego frame:    +X forward, +Y left, +Z up (meters)
//   camera frame: +Z forward (optical axis), +X right, +Y down
// Pixel (u, v) has u growing right and v growing down, origin at the top-left
// of the image. All geometry is carried in 64-bit floats.

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
};

// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  double operator()(int r, int c) const { return m[static_cast<size_t>(r) * 3 + c]; }
  double& operator()(int r, int c) { return m[static_cast<size_t>(r) * 3 + c]; }

  Vec3 apply(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }

  Mat3 mul(const Mat3& o) const;
  Mat3 transpose() const;
  double det() const;
};

Mat3 rotation_z(double yaw);

// SE(3) rigid transform: p' = rotation * p + translation.
struct RigidTransform {
  Mat3 rotation;
  Vec3 translation;

  Vec3 apply(const Vec3& p) const { return rotation.apply(p) + translation; }

  static RigidTransform identity() { return {}; }
  static RigidTransform from_translation(const Vec3& t) { return {Mat3{}, t}; }
  static RigidTransform from_yaw(double yaw, const Vec3& t = {}) {
    return {rotation_z(yaw), t};
  }

  // Rotation must be orthonormal with determinant +1 (within tol::kOrthonormal).
  bool is_valid() const;
};

RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
RigidTransform invert(const RigidTransform& t);

struct CameraModel {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;
  RigidTransform cam_to_ego;

  bool is_valid() const { return fx > 0 && fy > 0 && width > 0 && height > 0; }
};

struct PixelDepth {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;  // camera-frame Z, meters
};

// Pinhole projection of an ego-frame point. Empty when the point is at or
// behind the image plane or lands outside [0,width)x[0,height).
std::optional<PixelDepth> project(const Vec3& p_ego, const CameraModel& cam);

// Projection without the pixel-bounds check (still requires depth > 0); used
// when hulls of projected corners may extend past the image.
std::optional<PixelDepth> project_unbounded(const Vec3& p_ego, const CameraModel& cam);

// Exact inverse of project on its valid domain. depth must be positive.
Vec3 unproject(double u, double v, double depth, const CameraModel& cam);

// Uniform metric depth discretization with centers at
// d_min + (i + 0.5) * (d_max - d_min) / count.
struct DepthBins {
  double d_min = 1.0;
  double d_max = 60.0;
  int count = 1;

  bool is_valid() const { return d_min < d_max && count >= 1; }
  double width() const { return (d_max - d_min) / count; }
  double center(int i) const { return d_min + (i + 0.5) * width(); }

  // Containing bin, half-open intervals: [d_min, d_max) maps to [0, count).
  std::optional<int> bin_of(double depth) const {
    if (!(depth >= d_min) || !(depth < d_max)) return std::nullopt;
    int i = static_cast<int>((depth - d_min) / width());
    return i < count ? i : count - 1;
  }
};

// Regular 2D grid over the ego-centric ground plane. Cell (ix, iy) covers
// [origin + i*cell, origin + (i+1)*cell): lower-inclusive, upper-exclusive.
struct GridSpec2D {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double cell_size = 1.0;
  int nx = 1;
  int ny = 1;

  bool is_valid() const { return cell_size > 0 && nx >= 1 && ny >= 1; }
  int64_t cell_count() const { return static_cast<int64_t>(nx) * ny; }
  double center_x(int ix) const { return origin_x + (ix + 0.5) * cell_size; }
  double center_y(int iy) const { return origin_y + (iy + 0.5) * cell_size; }

  bool operator==(const GridSpec2D&) const = default;

  // Square grid centered on the ego covering [-range_m, range_m] per axis.
  static GridSpec2D square(double range_m, double cell_size);
};

struct Cell2D {
  int ix = 0;
  int iy = 0;
  bool operator==(const Cell2D&) const = default;
};

std::optional<Cell2D> bev_cell_of(const Vec3& p, const GridSpec2D& grid);

struct VoxelSpec3D {
  Vec3 origin;
  double cell_x = 1.0;
  double cell_y = 1.0;
  double cell_z = 1.0;
  int nx = 1;
  int ny = 1;
  int nz = 1;

  bool is_valid() const {
    return cell_x > 0 && cell_y > 0 && cell_z > 0 && nx >= 1 && ny >= 1 && nz >= 1;
  }
  int64_t cell_count() const { return static_cast<int64_t>(nx) * ny * nz; }
  Vec3 center_of(int ix, int iy, int iz) const {
    return {origin.x + (ix + 0.5) * cell_x, origin.y + (iy + 0.5) * cell_y,
            origin.z + (iz + 0.5) * cell_z};
  }

  bool operator==(const VoxelSpec3D&) const = default;
};

inline bool operator==(const Vec3& a, const Vec3& b) {
  return a.x == b.x && a.y == b.y && a.z == b.z;
}
inline bool operator==(const Mat3& a, const Mat3& b) { return a.m == b.m; }

struct Cell3D {
  int ix = 0;
  int iy = 0;
  int iz = 0;
  bool operator==(const Cell3D&) const = default;
};

std::optional<Cell3D> voxel_of(const Vec3& p, const VoxelSpec3D& spec);

}  // namespace sparsebev
