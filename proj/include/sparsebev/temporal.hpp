#pragma once

#include <deque>
#include <utility>

#include "sparsebev/geometry.hpp"
#include "sparsebev/sparse_conv.hpp"
#include "sparsebev/sparse_grid.hpp"

namespace sparsebev {

struct FramePose {
  double timestamp = 0.0;
  RigidTransform ego_to_world;
};

// Ring of up to capacity (grid, pose) pairs, newest last, strictly increasing
// timestamps. History grids are stored post-encoder.
class TemporalBuffer {
 public:
  explicit TemporalBuffer(size_t capacity) : capacity_(capacity) {}

  size_t capacity() const { return capacity_; }
  size_t size() const { return frames_.size(); }
  void clear() { frames_.clear(); }

  // Evicts the oldest entry when full; rejects non-increasing timestamps.
  void push(SparseGrid2D grid, const FramePose& pose);

  // index 0 = oldest.
  const std::pair<SparseGrid2D, FramePose>& at(size_t i) const { return frames_[i]; }

 private:
  size_t capacity_;
  std::deque<std::pair<SparseGrid2D, FramePose>> frames_;
};

// Remaps a history BEV grid into the current ego frame: each active cell
// center moves through inverse(cur.ego_to_world) * hist.ego_to_world reduced
// to the BEV plane (yaw + x/y translation), scattering to the nearest
// destination cell. Colliding sources are averaged in canonical source
// order; out-of-grid destinations are dropped.
SparseGrid2D align_history(const SparseGrid2D& hist, const FramePose& pose_hist,
                           const FramePose& pose_cur);

// Aligns every buffered frame to the current pose, channel-concatenates
// [current | newest history | ... | oldest history], zero-filling absent
// frames so the stack always has (capacity+1) * C channels, then applies the
// merge encoder.
SparseGrid2D merge_temporal(const TemporalBuffer& buffer, const SparseGrid2D& current,
                            const FramePose& pose_cur, const EncoderConfig& merge_cfg,
                            int threads = 1);

}  // namespace sparsebev
