#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sparsebev/geometry.hpp"
#include "sparsebev/sparse_grid.hpp"

namespace sparsebev {

struct LidarPoint;
struct PointCloud;

// Per-camera backbone output surrogate: one context vector per feature pixel.
// Layout is row-major (py, px, c): context[(py*wf + px)*channels + c].
struct ImageFeatures {
  int hf = 0;
  int wf = 0;
  int channels = 0;
  int stride = 1;  // input pixels per feature pixel
  std::vector<float> context;

  float at(int px, int py, int c) const {
    return context[(static_cast<size_t>(py) * wf + px) * channels + c];
  }
  float& at(int px, int py, int c) {
    return context[(static_cast<size_t>(py) * wf + px) * channels + c];
  }
  bool shape_ok() const {
    return hf > 0 && wf > 0 && channels > 0 && stride >= 1 &&
           context.size() == static_cast<size_t>(hf) * wf * channels;
  }
};

// Per-pixel categorical depth distribution over the bin set. Layout
// probs[(py*wf + px)*bins.count + b].
struct DepthDistribution {
  int hf = 0;
  int wf = 0;
  DepthBins bins;
  std::vector<float> probs;

  float at(int px, int py, int b) const {
    return probs[(static_cast<size_t>(py) * wf + px) * bins.count + b];
  }
  float& at(int px, int py, int b) {
    return probs[(static_cast<size_t>(py) * wf + px) * bins.count + b];
  }
  // True when every pixel's mass sums to 1 within tol::kDepthProbSum.
  bool normalized() const;
};

// Axis-aligned 2D box in input-image pixels, top-left + extent.
struct Box2D {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
};

struct ForegroundMask {
  int hf = 0;
  int wf = 0;
  std::vector<uint8_t> data;  // row-major (py, px)

  ForegroundMask() = default;
  ForegroundMask(int hf_, int wf_, bool value = false)
      : hf(hf_), wf(wf_), data(static_cast<size_t>(hf_) * wf_, value ? 1 : 0) {}

  bool at(int px, int py) const { return data[static_cast<size_t>(py) * wf + px] != 0; }
  void set(int px, int py, bool v) { data[static_cast<size_t>(py) * wf + px] = v ? 1 : 0; }
  size_t true_count() const;
};

// Per-pixel top-k depth-bin mask, layout as DepthDistribution::probs.
struct DepthBinMask {
  int hf = 0;
  int wf = 0;
  int nbins = 0;
  std::vector<uint8_t> data;

  bool at(int px, int py, int b) const {
    return data[(static_cast<size_t>(py) * wf + px) * nbins + b] != 0;
  }
  size_t true_count() const;
};

// Sparse set of lifted (pixel, depth bin) entries for one camera; entry i
// carries weighted_feature = alpha[bin] * context, channels floats at
// features[i*channels].
struct FrustumTensor {
  int camera_id = 0;
  int hf = 0;
  int wf = 0;
  int nbins = 0;
  int channels = 0;
  struct Slot {
    int px;
    int py;
    int bin;
  };
  std::vector<Slot> entries;
  std::vector<float> features;  // entries.size() * channels

  int64_t total_slots() const { return static_cast<int64_t>(hf) * wf * nbins; }
};

double frustum_occupancy(const FrustumTensor& f);

// Precomputed frustum-slot -> BEV-cell mapping for a fixed rig and shape.
// Slot encoding: slot = ((cam*hf + py)*wf + px)*nbins + bin, so ascending
// slot order is exactly the dense lift's accumulation order. cell_of holds
// the BEV key (iy*nx + ix) or -1 for out-of-grid slots. perm lists the
// non-sentinel slots sorted by (cell, slot); intervals partition perm into
// per-cell contiguous runs.
struct PoolingIndexTable {
  int n_cams = 0;
  int hf = 0;
  int wf = 0;
  int stride = 1;
  DepthBins bins;
  GridSpec2D grid;
  std::vector<int32_t> cell_of;
  std::vector<uint32_t> perm;
  struct Interval {
    int32_t cell;
    uint32_t start;
    uint32_t len;
  };
  std::vector<Interval> intervals;

  int64_t slot_count() const {
    return static_cast<int64_t>(n_cams) * hf * wf * bins.count;
  }
  int64_t slot_of(int cam, int px, int py, int bin) const {
    return ((static_cast<int64_t>(cam) * hf + py) * wf + px) * bins.count + bin;
  }
};

// One camera's inputs to the sparse lift.
struct CameraView {
  ImageFeatures img;
  DepthDistribution depth;
  ForegroundMask fg;
};

DepthDistribution softmax_depth(int hf, int wf, const DepthBins& bins,
                                std::span<const float> logits);

// Feature pixel is foreground iff its stride x stride input footprint
// intersects any box: px in [floor(x/s), ceil((x+w)/s)) clamped, same for py.
ForegroundMask foreground_mask_from_boxes(std::span<const Box2D> boxes,
                                          const CameraModel& cam, int hf, int wf,
                                          int stride);

// Union of the mask with n seeded random rectangles (sizes drawn uniformly in
// [min_size, max_size] feature pixels).
ForegroundMask add_noise_windows(const ForegroundMask& mask, int n, int min_size,
                                 int max_size, uint64_t seed);

// Per pixel keep the min(k, |D|) largest probabilities; ties resolve toward
// the lower bin index.
DepthBinMask topk_depth_mask(const DepthDistribution& dist, int k);

// Zero the distribution outside the foreground mask and the per-pixel top-k
// mask (no renormalization). Oracle-side counterpart of the sparse lift.
DepthDistribution apply_masks(const DepthDistribution& dist, const ForegroundMask& fg,
                              int k);

// Reference lift: plain loops, one add per (pixel, bin), accumulating in slot
// order. Deliberately unoptimized; the sparse path is checked against it.
DenseGrid2D lift_dense(const ImageFeatures& img, const DepthDistribution& dist,
                       const CameraModel& cam, const GridSpec2D& grid);
void lift_dense_into(DenseGrid2D& out, const ImageFeatures& img,
                     const DepthDistribution& dist, const CameraModel& cam);

PoolingIndexTable build_pooling_index(std::span<const CameraModel> cams, int hf, int wf,
                                      int stride, const DepthBins& bins,
                                      const GridSpec2D& grid);

// Masked sparse lift over the rig. Equals the dense path bit-for-bit when
// every mask is full, and within tol::kLiftMatch otherwise, because per-cell
// sums run in ascending slot order on both sides.
SparseGrid2D lift_sparse(std::span<const CameraView> views, int k,
                         const PoolingIndexTable& table, int threads = 1);

// Full-mask pooling through the interval layout (one gather per cell).
SparseGrid2D pool_full(std::span<const CameraView> views, const PoolingIndexTable& table);

FrustumTensor build_frustum(const ImageFeatures& img, const DepthDistribution& dist,
                            const ForegroundMask& fg, int k, int camera_id);

// One-hot depth supervision targets; -1 marks pixels without a valid depth.
struct DepthTarget {
  int hf = 0;
  int wf = 0;
  std::vector<int32_t> bin;  // row-major (py, px)

  int32_t at(int px, int py) const { return bin[static_cast<size_t>(py) * wf + px]; }
  size_t valid_count() const;
};

// Z-buffer minimum camera depth per feature-pixel footprint, discretized to
// the containing bin; depths outside [d_min, d_max) are dropped.
DepthTarget gt_depth_map(const PointCloud& points, const CameraModel& cam, int hf,
                         int wf, int stride, const DepthBins& bins);

// Mean over valid pixels of -log(prob at the target bin), probability floored
// at tol::kProbFloor. Zero when no pixel is valid.
double depth_loss(const DepthDistribution& dist, const DepthTarget& target);

}  // namespace sparsebev
