#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "sparsebev/lidar.hpp"
#include "sparsebev/sparse_grid.hpp"
#include "sparsebev/temporal.hpp"

namespace sparsebev {

// Grid container format (little-endian throughout):
//   magic "SBG2" | "SBG3", version u32 = 1
//   spec: origins f64, cell sizes f64, counts u32
//   channels u32, record count u64
//   records sorted in canonical cell order: ix u32, iy u32 [, iz u32],
//   then channels * f32. Only non-zero cells are written.
void save_grid(const std::string& path, const SparseGrid2D& grid);
void save_grid(const std::string& path, const SparseGrid3D& grid);
SparseGrid2D load_grid2d(const std::string& path);
SparseGrid3D load_grid3d(const std::string& path);

// Point cloud format: raw records of 4 little-endian f32 (x, y, z,
// intensity), plus a JSON sidecar at <path>.json carrying the frame index and
// ego pose.
void save_point_cloud(const std::string& path, const PointCloud& pc,
                      const FramePose& pose, int frame_id);
PointCloud load_point_cloud(const std::string& path, FramePose* pose = nullptr,
                            int* frame_id = nullptr);

// FNV-1a 64-bit, used for config hashes and scene locks.
uint64_t hash_bytes(std::string_view bytes);
std::string hash_hex(uint64_t h);

}  // namespace sparsebev
