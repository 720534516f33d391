#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparsebev/geometry.hpp"
#include "sparsebev/sparse_grid.hpp"

namespace sparsebev {

// Linear center-style head: per-class sigmoid score plus a 7-channel box
// regression (dx, dy, z, log l, log w, log h, yaw) read off the fused BEV
// feature.
struct HeadWeights {
  int n_classes = 0;
  int channels = 0;
  std::vector<float> score_w;  // n_classes * channels
  std::vector<float> score_b;  // n_classes
  std::vector<float> reg_w;    // 7 * channels
  std::vector<float> reg_b;    // 7

  bool shape_ok() const;
  static HeadWeights zeros(int n_classes, int channels);
  static HeadWeights seeded(int n_classes, int channels, uint64_t seed);
};

struct Detection {
  Vec3 center;
  double l = 1.0;
  double w = 1.0;
  double h = 1.0;
  double yaw = 0.0;
  int class_id = 0;
  double score = 0.0;
};

struct Box3D {
  Vec3 center;
  double l = 1.0;
  double w = 1.0;
  double h = 1.0;
  double yaw = 0.0;
  int class_id = 0;
  int track_id = 0;
};

// One single-channel score grid per class, active set equal to the input's.
std::vector<SparseGrid2D> score_heatmap(const SparseGrid2D& g, const HeadWeights& w);

struct Peak {
  Cell2D cell;
  int class_id = 0;
  double score = 0.0;
};

// A cell is a peak iff its score is >= threshold and it beats every active
// same-class cell within the Chebyshev radius: strictly greater score, or
// equal score and earlier canonical cell order. Returns peaks sorted by score
// descending (ties canonical), at most max_out.
std::vector<Peak> select_peaks(const std::vector<SparseGrid2D>& heatmaps,
                               int radius_cells, double score_threshold, int max_out);

// Center = cell center + clamp(dx,dy to [-0.5,0.5]) * cell_size; dims from
// exp of log-dims; z and yaw read directly.
std::vector<Detection> decode_boxes(std::span<const Peak> peaks, const SparseGrid2D& g,
                                    const HeadWeights& w, const GridSpec2D& grid);

struct EvalResult {
  double precision = 0.0;
  double recall = 0.0;
  double ap = 0.0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
};

// Greedy class-aware matching in descending score, BEV (x, y) center
// distance <= match_radius. AP is the area under the un-interpolated
// precision-recall step curve.
EvalResult evaluate(std::span<const Detection> dets, std::span<const Box3D> gts,
                    double match_radius);

// JSON lines, one detection per line, with frame id and config hash.
void write_detections_jsonl(const std::string& path, std::span<const Detection> dets,
                            int frame_id, const std::string& config_hash);
std::vector<Detection> load_detections_jsonl(const std::string& path);

}  // namespace sparsebev
