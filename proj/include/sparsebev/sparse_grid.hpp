#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "sparsebev/geometry.hpp"

namespace sparsebev {

// Bytes charged per materialized cell on top of the feature payload when
// estimating sparse storage (two 32-bit indices plus map bookkeeping).
inline constexpr int64_t kCellKeyOverheadBytes = 16;

// Sparse BEV feature map: associative (ix, iy) -> feature vector of length
// channels(). An absent cell is an all-zero feature. A materialized cell may
// hold an exact-zero vector after cancellation; such cells do not count as
// active and are removed by compact(). Wherever an order is observable
// (serialization, reductions, dense bridging) cells are visited in ascending
// (iy, ix), which equals ascending key order for key = iy * nx + ix.
class SparseGrid2D {
 public:
  SparseGrid2D() = default;
  SparseGrid2D(const GridSpec2D& spec, int channels);

  const GridSpec2D& spec() const { return spec_; }
  int channels() const { return channels_; }

  int64_t key_of(const Cell2D& c) const {
    return static_cast<int64_t>(c.iy) * spec_.nx + c.ix;
  }
  Cell2D cell_of(int64_t key) const {
    return {static_cast<int>(key % spec_.nx), static_cast<int>(key / spec_.nx)};
  }
  bool in_range(const Cell2D& c) const {
    return c.ix >= 0 && c.ix < spec_.nx && c.iy >= 0 && c.iy < spec_.ny;
  }

  // Elementwise sum into the cell (zero if absent). Out-of-range cells and
  // wrong-length features are rejected. Does not prune cancellations.
  void accumulate(const Cell2D& cell, std::span<const float> feat);
  void set(const Cell2D& cell, std::span<const float> feat);

  // nullptr when the cell is not materialized.
  const std::vector<float>* find(const Cell2D& cell) const;
  const std::vector<float>* find_key(int64_t key) const;

  size_t materialized_count() const { return cells_.size(); }
  int64_t active_count() const;  // materialized cells with a non-zero vector
  double sparsity() const;       // empty cells / total cells

  void compact();  // drop exact-zero vectors

  std::vector<int64_t> sorted_keys() const;         // canonical order
  std::vector<int64_t> sorted_active_keys() const;  // canonical, non-zero only

  const std::unordered_map<int64_t, std::vector<float>>& cells() const { return cells_; }
  std::unordered_map<int64_t, std::vector<float>>& cells() { return cells_; }

 private:
  GridSpec2D spec_;
  int channels_ = 0;
  std::unordered_map<int64_t, std::vector<float>> cells_;
};

// Sparse voxel feature map, canonical order ascending (iz, iy, ix).
class SparseGrid3D {
 public:
  SparseGrid3D() = default;
  SparseGrid3D(const VoxelSpec3D& spec, int channels);

  const VoxelSpec3D& spec() const { return spec_; }
  int channels() const { return channels_; }

  int64_t key_of(const Cell3D& c) const {
    return (static_cast<int64_t>(c.iz) * spec_.ny + c.iy) * spec_.nx + c.ix;
  }
  Cell3D cell_of(int64_t key) const {
    int ix = static_cast<int>(key % spec_.nx);
    int64_t rest = key / spec_.nx;
    return {ix, static_cast<int>(rest % spec_.ny), static_cast<int>(rest / spec_.ny)};
  }

  void accumulate(const Cell3D& cell, std::span<const float> feat);
  void set(const Cell3D& cell, std::span<const float> feat);
  const std::vector<float>* find(const Cell3D& cell) const;

  size_t materialized_count() const { return cells_.size(); }
  int64_t active_count() const;
  double sparsity() const;
  void compact();
  std::vector<int64_t> sorted_keys() const;

  const std::unordered_map<int64_t, std::vector<float>>& cells() const { return cells_; }

 private:
  VoxelSpec3D spec_;
  int channels_ = 0;
  std::unordered_map<int64_t, std::vector<float>> cells_;
};

// Dense nx*ny*C array, row-major (iy, ix, c). Reference representation for
// the dense oracles.
struct DenseGrid2D {
  GridSpec2D spec;
  int channels = 0;
  std::vector<float> data;  // size nx*ny*channels

  DenseGrid2D() = default;
  DenseGrid2D(const GridSpec2D& s, int c)
      : spec(s), channels(c), data(static_cast<size_t>(s.cell_count()) * c, 0.0f) {}

  size_t index(int ix, int iy, int c) const {
    return (static_cast<size_t>(iy) * spec.nx + ix) * channels + c;
  }
  float at(int ix, int iy, int c) const { return data[index(ix, iy, c)]; }
  float& at(int ix, int iy, int c) { return data[index(ix, iy, c)]; }
};

// Channel concatenation on the union of active sets; the missing side is
// zero-filled. Specs must match exactly.
SparseGrid2D concat_fuse(const SparseGrid2D& a, const SparseGrid2D& b);

DenseGrid2D to_dense(const SparseGrid2D& grid);
SparseGrid2D from_dense(const DenseGrid2D& dense);  // drops exact-zero cells

// Equality ignoring materialized exact-zero cells; feature compare is exact.
bool semantic_equal(const SparseGrid2D& a, const SparseGrid2D& b);
// Max absolute feature difference over the union of materialized cells.
// Specs/channels must match, otherwise returns +inf.
double max_abs_diff(const SparseGrid2D& a, const SparseGrid2D& b);

// Storage model used by the bench module (payloads are 32-bit reals).
int64_t estimated_sparse_bytes(const SparseGrid2D& grid);
int64_t estimated_sparse_bytes(int64_t active_count, int channels);
int64_t estimated_dense_bytes(const GridSpec2D& spec, int channels);

}  // namespace sparsebev
