#include "sparsebev/lidar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "sparsebev/threading.hpp"
#include "sparsebev/tolerances.hpp"

namespace sparsebev {

namespace {

void voxel_feature(const VoxelSpec3D& spec, const VoxelFeatureConfig& cfg,
                   const PointCloud& pc, const Cell3D& cell,
                   const std::vector<uint32_t>& point_ids, std::vector<float>& out) {
  size_t used = std::min<size_t>(point_ids.size(),
                                 static_cast<size_t>(cfg.max_points_per_voxel));
  Vec3 center = spec.center_of(cell.ix, cell.iy, cell.iz);
  double sx = 0.0, sy = 0.0, sz = 0.0, si = 0.0;
  for (size_t i = 0; i < used; ++i) {
    const LidarPoint& p = pc.points[point_ids[i]];
    sx += p.x - center.x;
    sy += p.y - center.y;
    sz += p.z - center.z;
    si += p.intensity;
  }
  double inv = 1.0 / static_cast<double>(used);
  std::fill(out.begin(), out.end(), 0.0f);
  double stats[5] = {sx * inv, sy * inv, sz * inv, si * inv,
                     std::log1p(static_cast<double>(used))};
  for (int c = 0; c < std::min(cfg.out_channels, 5); ++c)
    out[static_cast<size_t>(c)] = static_cast<float>(stats[c]);
}

}  // namespace

SparseGrid3D voxelize(const PointCloud& pc, const VoxelSpec3D& spec,
                      const VoxelFeatureConfig& cfg, VoxelizeStats* stats,
                      int threads) {
  if (!spec.is_valid()) throw std::invalid_argument("voxelize: invalid voxel spec");
  if (cfg.max_points_per_voxel < 1)
    throw std::invalid_argument("voxelize: max_points_per_voxel must be >= 1");
  if (cfg.out_channels < 1)
    throw std::invalid_argument("voxelize: out_channels must be >= 1");

  SparseGrid3D grid(spec, cfg.out_channels);

  // Phase 1: bucket point indices per voxel, preserving input order. Chunks
  // are merged in order so the canonical point order survives threading.
  int nchunks = effective_threads(threads);
  std::vector<std::unordered_map<int64_t, std::vector<uint32_t>>> buckets(
      static_cast<size_t>(nchunks));
  std::vector<size_t> dropped_per_chunk(static_cast<size_t>(nchunks), 0);
  parallel_chunks(pc.points.size(), threads, [&](int chunk, size_t begin, size_t end) {
    auto& local = buckets[static_cast<size_t>(chunk)];
    for (size_t i = begin; i < end; ++i) {
      const LidarPoint& p = pc.points[i];
      auto cell = voxel_of({p.x, p.y, p.z}, spec);
      if (!cell) {
        ++dropped_per_chunk[static_cast<size_t>(chunk)];
        continue;
      }
      local[grid.key_of(*cell)].push_back(static_cast<uint32_t>(i));
    }
  });

  std::unordered_map<int64_t, std::vector<uint32_t>> merged;
  size_t dropped = 0;
  for (int c = 0; c < nchunks; ++c) {
    dropped += dropped_per_chunk[static_cast<size_t>(c)];
    for (auto& [key, ids] : buckets[static_cast<size_t>(c)]) {
      auto& dst = merged[key];
      dst.insert(dst.end(), ids.begin(), ids.end());
    }
  }
  if (stats) {
    stats->dropped = dropped;
    stats->in_range = pc.points.size() - dropped;
  }

  // Phase 2: per-voxel statistics; each voxel reads only its own ordered
  // point list, so parallel output matches serial bit for bit.
  std::vector<int64_t> keys;
  keys.reserve(merged.size());
  for (const auto& [key, ids] : merged) keys.push_back(key);
  std::sort(keys.begin(), keys.end());

  std::vector<std::vector<float>> feats(keys.size());
  parallel_chunks(keys.size(), threads, [&](int, size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      feats[i].resize(static_cast<size_t>(cfg.out_channels));
      voxel_feature(spec, cfg, pc, grid.cell_of(keys[i]), merged[keys[i]], feats[i]);
    }
  });
  for (size_t i = 0; i < keys.size(); ++i) grid.set(grid.cell_of(keys[i]), feats[i]);
  return grid;
}

SparseGrid2D flatten_to_bev(const SparseGrid3D& vox, const GridSpec2D& bev) {
  const VoxelSpec3D& vs = vox.spec();
  double fx = bev.cell_size / vs.cell_x;
  double fy = bev.cell_size / vs.cell_y;
  int factor_x = static_cast<int>(std::llround(fx));
  int factor_y = static_cast<int>(std::llround(fy));
  if (factor_x < 1 || factor_y < 1 || std::abs(fx - factor_x) > tol::kGridAlign ||
      std::abs(fy - factor_y) > tol::kGridAlign)
    throw std::invalid_argument(
        "flatten_to_bev: BEV cell must be an integer multiple of the voxel cell");
  if (std::abs(bev.origin_x - vs.origin.x) > tol::kGridAlign ||
      std::abs(bev.origin_y - vs.origin.y) > tol::kGridAlign)
    throw std::invalid_argument("flatten_to_bev: grid origins differ");
  if (static_cast<int64_t>(bev.nx) * factor_x < vs.nx ||
      static_cast<int64_t>(bev.ny) * factor_y < vs.ny)
    throw std::invalid_argument("flatten_to_bev: BEV grid does not cover the voxel grid");

  int c_in = vox.channels();
  SparseGrid2D out(bev, vs.nz * c_in);

  std::vector<float> feat(static_cast<size_t>(c_in));
  for (int64_t key : vox.sorted_keys()) {
    Cell3D cell = vox.cell_of(key);
    const std::vector<float>& v = *vox.find(cell);
    bool nonzero = false;
    for (float x : v) nonzero |= x != 0.0f;
    if (!nonzero) continue;
    Cell2D pillar{cell.ix / factor_x, cell.iy / factor_y};
    // Slice iz lands in channel block [iz*C, (iz+1)*C); colliding voxels sum.
    auto [it, inserted] =
        out.cells().try_emplace(out.key_of(pillar),
                                static_cast<size_t>(vs.nz) * c_in, 0.0f);
    for (int c = 0; c < c_in; ++c)
      it->second[static_cast<size_t>(cell.iz) * c_in + c] += v[static_cast<size_t>(c)];
  }
  return out;
}

}  // namespace sparsebev
