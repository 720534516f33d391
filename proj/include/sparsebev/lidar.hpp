#pragma once

#include <cstdint>
#include <vector>

#include "sparsebev/geometry.hpp"
#include "sparsebev/sparse_grid.hpp"

namespace sparsebev {

struct LidarPoint {
  float x = 0.0f;
  float y = 0.0f;
  float z = 0.0f;
  float intensity = 0.0f;
};

struct PointCloud {
  std::vector<LidarPoint> points;

  size_t size() const { return points.size(); }
};

struct VoxelFeatureConfig {
  int max_points_per_voxel = 32;
  int out_channels = 8;  // >= 5 keeps the full statistic; extra channels are zero
};

struct VoxelizeStats {
  size_t in_range = 0;
  size_t dropped = 0;  // outside the voxel volume
};

// Hand-crafted per-voxel statistic standing in for a learned point encoder:
// [mean dx, mean dy, mean dz (offsets from the voxel center), mean intensity,
// log(1 + count)], zero-padded or truncated to out_channels. At most
// max_points_per_voxel points contribute per voxel, first-come in input
// order; means are accumulated in 64-bit then stored as 32-bit payloads.
SparseGrid3D voxelize(const PointCloud& pc, const VoxelSpec3D& spec,
                      const VoxelFeatureConfig& cfg, VoxelizeStats* stats = nullptr,
                      int threads = 1);

// Stacks each pillar's z-slices into channel blocks: slice iz lands in output
// channels [iz*C, (iz+1)*C). Voxel and BEV grids must be aligned (equal
// origins, BEV cell an integer multiple of the voxel cell, full coverage).
SparseGrid2D flatten_to_bev(const SparseGrid3D& vox, const GridSpec2D& bev);

}  // namespace sparsebev
