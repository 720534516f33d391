#include "sparsebev/view_transformer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sparsebev/lidar.hpp"
#include "sparsebev/rng.hpp"
#include "sparsebev/threading.hpp"
#include "sparsebev/tolerances.hpp"

namespace sparsebev {

bool DepthDistribution::normalized() const {
  for (int py = 0; py < hf; ++py) {
    for (int px = 0; px < wf; ++px) {
      double s = 0.0;
      for (int b = 0; b < bins.count; ++b) s += at(px, py, b);
      if (std::abs(s - 1.0) > tol::kDepthProbSum) return false;
    }
  }
  return true;
}

size_t ForegroundMask::true_count() const {
  size_t n = 0;
  for (uint8_t v : data) n += v != 0;
  return n;
}

size_t DepthBinMask::true_count() const {
  size_t n = 0;
  for (uint8_t v : data) n += v != 0;
  return n;
}

size_t DepthTarget::valid_count() const {
  size_t n = 0;
  for (int32_t b : bin) n += b >= 0;
  return n;
}

double frustum_occupancy(const FrustumTensor& f) {
  return static_cast<double>(f.entries.size()) / static_cast<double>(f.total_slots());
}

DepthDistribution softmax_depth(int hf, int wf, const DepthBins& bins,
                                std::span<const float> logits) {
  if (!bins.is_valid()) throw std::invalid_argument("softmax_depth: invalid bins");
  size_t expect = static_cast<size_t>(hf) * wf * bins.count;
  if (logits.size() != expect)
    throw std::invalid_argument("softmax_depth: logits size mismatch");

  DepthDistribution d;
  d.hf = hf;
  d.wf = wf;
  d.bins = bins;
  d.probs.resize(expect);
  int nb = bins.count;
  for (size_t pix = 0; pix < static_cast<size_t>(hf) * wf; ++pix) {
    const float* in = logits.data() + pix * nb;
    float* out = d.probs.data() + pix * nb;
    float mx = in[0];
    for (int b = 1; b < nb; ++b) mx = std::max(mx, in[b]);
    double sum = 0.0;
    for (int b = 0; b < nb; ++b) {
      double e = std::exp(static_cast<double>(in[b]) - mx);
      out[b] = static_cast<float>(e);
      sum += e;
    }
    float inv = static_cast<float>(1.0 / sum);
    for (int b = 0; b < nb; ++b) out[b] *= inv;
  }
  return d;
}

ForegroundMask foreground_mask_from_boxes(std::span<const Box2D> boxes,
                                          const CameraModel& cam, int hf, int wf,
                                          int stride) {
  (void)cam;  // boxes already live in this camera's pixel coordinates
  ForegroundMask m(hf, wf, false);
  for (const Box2D& b : boxes) {
    if (b.w < 0 || b.h < 0) continue;
    int px0 = std::max(0, static_cast<int>(std::floor(b.x / stride)));
    int px1 = std::min(wf, static_cast<int>(std::ceil((b.x + b.w) / stride)));
    int py0 = std::max(0, static_cast<int>(std::floor(b.y / stride)));
    int py1 = std::min(hf, static_cast<int>(std::ceil((b.y + b.h) / stride)));
    for (int py = py0; py < py1; ++py)
      for (int px = px0; px < px1; ++px) m.set(px, py, true);
  }
  return m;
}

ForegroundMask add_noise_windows(const ForegroundMask& mask, int n, int min_size,
                                 int max_size, uint64_t seed) {
  if (n < 0) throw std::invalid_argument("add_noise_windows: n must be >= 0");
  ForegroundMask out = mask;
  SplitMix64 rng(seed);
  for (int i = 0; i < n; ++i) {
    int w = min_size + static_cast<int>(rng.next_below(
                           static_cast<uint64_t>(max_size - min_size + 1)));
    int h = min_size + static_cast<int>(rng.next_below(
                           static_cast<uint64_t>(max_size - min_size + 1)));
    int px0 = static_cast<int>(rng.next_below(static_cast<uint64_t>(out.wf)));
    int py0 = static_cast<int>(rng.next_below(static_cast<uint64_t>(out.hf)));
    int px1 = std::min(out.wf, px0 + w);
    int py1 = std::min(out.hf, py0 + h);
    for (int py = py0; py < py1; ++py)
      for (int px = px0; px < px1; ++px) out.set(px, py, true);
  }
  return out;
}

namespace {

// Top-k bin indices for one pixel, ascending; ties go to the lower bin.
void topk_bins_for_pixel(const float* probs, int nb, int k, std::vector<int>& out) {
  out.clear();
  k = std::min(k, nb);
  if (k == nb) {
    out.resize(nb);
    std::iota(out.begin(), out.end(), 0);
    return;
  }
  // Selection over (prob desc, index asc).
  std::vector<int> idx(nb);
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&](int a, int b) {
    if (probs[a] != probs[b]) return probs[a] > probs[b];
    return a < b;
  });
  out.assign(idx.begin(), idx.begin() + k);
  std::sort(out.begin(), out.end());
}

}  // namespace

DepthBinMask topk_depth_mask(const DepthDistribution& dist, int k) {
  if (k < 1) throw std::invalid_argument("topk_depth_mask: k must be >= 1");
  DepthBinMask m;
  m.hf = dist.hf;
  m.wf = dist.wf;
  m.nbins = dist.bins.count;
  m.data.assign(static_cast<size_t>(dist.hf) * dist.wf * dist.bins.count, 0);
  std::vector<int> bins;
  for (size_t pix = 0; pix < static_cast<size_t>(dist.hf) * dist.wf; ++pix) {
    const float* p = dist.probs.data() + pix * dist.bins.count;
    topk_bins_for_pixel(p, dist.bins.count, k, bins);
    for (int b : bins) m.data[pix * dist.bins.count + b] = 1;
  }
  return m;
}

DepthDistribution apply_masks(const DepthDistribution& dist, const ForegroundMask& fg,
                              int k) {
  if (fg.hf != dist.hf || fg.wf != dist.wf)
    throw std::invalid_argument("apply_masks: mask shape mismatch");
  DepthBinMask topk = topk_depth_mask(dist, k);
  DepthDistribution out = dist;
  for (int py = 0; py < dist.hf; ++py) {
    for (int px = 0; px < dist.wf; ++px) {
      bool keep_pixel = fg.at(px, py);
      for (int b = 0; b < dist.bins.count; ++b) {
        if (!keep_pixel || !topk.at(px, py, b)) out.at(px, py, b) = 0.0f;
      }
    }
  }
  return out;
}

void lift_dense_into(DenseGrid2D& out, const ImageFeatures& img,
                     const DepthDistribution& dist, const CameraModel& cam) {
  if (!img.shape_ok()) throw std::invalid_argument("lift_dense: bad image features");
  if (dist.hf != img.hf || dist.wf != img.wf)
    throw std::invalid_argument("lift_dense: distribution shape mismatch");

  // Reference path: one unprojection and one add per (pixel, bin), in slot
  // order. Keep this the plainest possible loop.
  for (int py = 0; py < img.hf; ++py) {
    for (int px = 0; px < img.wf; ++px) {
      double u = (px + 0.5) * img.stride;
      double v = (py + 0.5) * img.stride;
      for (int b = 0; b < dist.bins.count; ++b) {
        Vec3 p = unproject(u, v, dist.bins.center(b), cam);
        auto cell = bev_cell_of(p, out.spec);
        if (!cell) continue;
        float alpha = dist.at(px, py, b);
        for (int c = 0; c < img.channels; ++c)
          out.at(cell->ix, cell->iy, c) += alpha * img.at(px, py, c);
      }
    }
  }
}

DenseGrid2D lift_dense(const ImageFeatures& img, const DepthDistribution& dist,
                       const CameraModel& cam, const GridSpec2D& grid) {
  DenseGrid2D out(grid, img.channels);
  lift_dense_into(out, img, dist, cam);
  return out;
}

PoolingIndexTable build_pooling_index(std::span<const CameraModel> cams, int hf, int wf,
                                      int stride, const DepthBins& bins,
                                      const GridSpec2D& grid) {
  if (!grid.is_valid() || !bins.is_valid())
    throw std::invalid_argument("build_pooling_index: invalid grid or bins");
  PoolingIndexTable t;
  t.n_cams = static_cast<int>(cams.size());
  t.hf = hf;
  t.wf = wf;
  t.stride = stride;
  t.bins = bins;
  t.grid = grid;
  t.cell_of.assign(static_cast<size_t>(t.slot_count()), -1);

  size_t slot = 0;
  std::vector<std::pair<int32_t, uint32_t>> pairs;  // (cell, slot)
  for (const CameraModel& cam : cams) {
    for (int py = 0; py < hf; ++py) {
      for (int px = 0; px < wf; ++px) {
        double u = (px + 0.5) * stride;
        double v = (py + 0.5) * stride;
        for (int b = 0; b < bins.count; ++b, ++slot) {
          Vec3 p = unproject(u, v, bins.center(b), cam);
          auto cell = bev_cell_of(p, grid);
          if (!cell) continue;
          int32_t key = static_cast<int32_t>(static_cast<int64_t>(cell->iy) * grid.nx +
                                             cell->ix);
          t.cell_of[slot] = key;
          pairs.emplace_back(key, static_cast<uint32_t>(slot));
        }
      }
    }
  }

  std::sort(pairs.begin(), pairs.end());
  t.perm.resize(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) t.perm[i] = pairs[i].second;
  for (size_t i = 0; i < pairs.size();) {
    size_t j = i;
    while (j < pairs.size() && pairs[j].first == pairs[i].first) ++j;
    t.intervals.push_back({pairs[i].first, static_cast<uint32_t>(i),
                           static_cast<uint32_t>(j - i)});
    i = j;
  }
  return t;
}

namespace {

void check_views_against_table(std::span<const CameraView> views,
                               const PoolingIndexTable& table) {
  if (static_cast<int>(views.size()) != table.n_cams)
    throw std::invalid_argument("lift: camera count does not match the index table");
  for (const CameraView& v : views) {
    if (v.img.hf != table.hf || v.img.wf != table.wf || v.img.stride != table.stride)
      throw std::invalid_argument("lift: image feature shape does not match the table");
    if (v.depth.hf != table.hf || v.depth.wf != table.wf ||
        v.depth.bins.count != table.bins.count)
      throw std::invalid_argument("lift: depth shape does not match the table");
    if (v.fg.hf != table.hf || v.fg.wf != table.wf)
      throw std::invalid_argument("lift: mask shape does not match the table");
    if (v.img.channels != views[0].img.channels)
      throw std::invalid_argument("lift: channel counts differ between cameras");
  }
}

struct KeptSlot {
  int32_t cell;
  uint32_t slot;
};

// Masked slots of one camera, ascending slot order.
void gather_kept_slots(const CameraView& view, int cam_index, int k,
                       const PoolingIndexTable& table, std::vector<KeptSlot>& out) {
  int nb = table.bins.count;
  std::vector<int> bins;
  for (int py = 0; py < table.hf; ++py) {
    for (int px = 0; px < table.wf; ++px) {
      if (!view.fg.at(px, py)) continue;
      const float* probs =
          view.depth.probs.data() + (static_cast<size_t>(py) * table.wf + px) * nb;
      topk_bins_for_pixel(probs, nb, k, bins);
      for (int b : bins) {
        int64_t slot = table.slot_of(cam_index, px, py, b);
        int32_t cell = table.cell_of[static_cast<size_t>(slot)];
        if (cell >= 0) out.push_back({cell, static_cast<uint32_t>(slot)});
      }
    }
  }
}

}  // namespace

SparseGrid2D lift_sparse(std::span<const CameraView> views, int k,
                         const PoolingIndexTable& table, int threads) {
  check_views_against_table(views, table);
  if (k < 1) throw std::invalid_argument("lift_sparse: k must be >= 1");
  int channels = views.empty() ? 1 : views[0].img.channels;
  SparseGrid2D out(table.grid, channels);
  if (views.empty()) return out;

  // Phase 1: per-camera masked slots (parallel; cameras are independent and
  // camera index is the slot's most significant part, so concatenation in
  // camera order keeps slots globally ascending).
  std::vector<std::vector<KeptSlot>> per_cam(views.size());
  parallel_chunks(views.size(), threads, [&](int, size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i)
      gather_kept_slots(views[i], static_cast<int>(i), k, table, per_cam[i]);
  });
  std::vector<KeptSlot> kept;
  size_t total = 0;
  for (const auto& v : per_cam) total += v.size();
  kept.reserve(total);
  for (const auto& v : per_cam) kept.insert(kept.end(), v.begin(), v.end());

  // Phase 2: canonical per-cell reduction. Stable sort by cell keeps slots
  // ascending within each cell, matching the dense path's accumulation order
  // add for add.
  std::stable_sort(kept.begin(), kept.end(),
                   [](const KeptSlot& a, const KeptSlot& b) { return a.cell < b.cell; });

  std::vector<std::pair<size_t, size_t>> runs;
  for (size_t i = 0; i < kept.size();) {
    size_t j = i;
    while (j < kept.size() && kept[j].cell == kept[i].cell) ++j;
    runs.emplace_back(i, j);
    i = j;
  }

  int nb = table.bins.count;
  int64_t slots_per_cam = static_cast<int64_t>(table.hf) * table.wf * nb;

  auto reduce_run = [&](size_t begin, size_t end, std::vector<float>& acc) {
    std::fill(acc.begin(), acc.end(), 0.0f);
    for (size_t i = begin; i < end; ++i) {
      int64_t slot = kept[i].slot;
      int cam = static_cast<int>(slot / slots_per_cam);
      int64_t rem = slot % slots_per_cam;
      int bin = static_cast<int>(rem % nb);
      int64_t pix = rem / nb;
      int px = static_cast<int>(pix % table.wf);
      int py = static_cast<int>(pix / table.wf);
      const CameraView& view = views[cam];
      float alpha = view.depth.at(px, py, bin);
      const float* ctx =
          view.img.context.data() + (static_cast<size_t>(py) * table.wf + px) * channels;
      for (int c = 0; c < channels; ++c) acc[c] += alpha * ctx[c];
    }
  };

  std::vector<std::vector<std::pair<int64_t, std::vector<float>>>> produced(
      static_cast<size_t>(effective_threads(threads)));
  parallel_chunks(runs.size(), threads, [&](int chunk, size_t begin, size_t end) {
    std::vector<float> acc(static_cast<size_t>(channels));
    for (size_t r = begin; r < end; ++r) {
      reduce_run(runs[r].first, runs[r].second, acc);
      produced[static_cast<size_t>(chunk)].emplace_back(kept[runs[r].first].cell, acc);
    }
  });
  for (const auto& chunk : produced)
    for (const auto& [key, feat] : chunk) out.set(out.cell_of(key), feat);
  return out;
}

SparseGrid2D pool_full(std::span<const CameraView> views, const PoolingIndexTable& table) {
  check_views_against_table(views, table);
  int channels = views.empty() ? 1 : views[0].img.channels;
  SparseGrid2D out(table.grid, channels);
  int nb = table.bins.count;
  int64_t slots_per_cam = static_cast<int64_t>(table.hf) * table.wf * nb;

  std::vector<float> acc(static_cast<size_t>(channels));
  for (const auto& iv : table.intervals) {
    std::fill(acc.begin(), acc.end(), 0.0f);
    for (uint32_t i = iv.start; i < iv.start + iv.len; ++i) {
      int64_t slot = table.perm[i];
      int cam = static_cast<int>(slot / slots_per_cam);
      int64_t rem = slot % slots_per_cam;
      int bin = static_cast<int>(rem % nb);
      int64_t pix = rem / nb;
      int px = static_cast<int>(pix % table.wf);
      int py = static_cast<int>(pix / table.wf);
      const CameraView& view = views[cam];
      float alpha = view.depth.at(px, py, bin);
      const float* ctx =
          view.img.context.data() + (static_cast<size_t>(py) * table.wf + px) * channels;
      for (int c = 0; c < channels; ++c) acc[c] += alpha * ctx[c];
    }
    out.set(out.cell_of(iv.cell), acc);
  }
  return out;
}

FrustumTensor build_frustum(const ImageFeatures& img, const DepthDistribution& dist,
                            const ForegroundMask& fg, int k, int camera_id) {
  if (dist.hf != img.hf || dist.wf != img.wf || fg.hf != img.hf || fg.wf != img.wf)
    throw std::invalid_argument("build_frustum: shape mismatch");
  FrustumTensor f;
  f.camera_id = camera_id;
  f.hf = img.hf;
  f.wf = img.wf;
  f.nbins = dist.bins.count;
  f.channels = img.channels;

  std::vector<int> bins;
  for (int py = 0; py < img.hf; ++py) {
    for (int px = 0; px < img.wf; ++px) {
      if (!fg.at(px, py)) continue;
      const float* probs =
          dist.probs.data() + (static_cast<size_t>(py) * img.wf + px) * dist.bins.count;
      topk_bins_for_pixel(probs, dist.bins.count, k, bins);
      for (int b : bins) {
        f.entries.push_back({px, py, b});
        float alpha = probs[b];
        for (int c = 0; c < img.channels; ++c)
          f.features.push_back(alpha * img.at(px, py, c));
      }
    }
  }
  return f;
}

DepthTarget gt_depth_map(const PointCloud& points, const CameraModel& cam, int hf,
                         int wf, int stride, const DepthBins& bins) {
  DepthTarget t;
  t.hf = hf;
  t.wf = wf;
  t.bin.assign(static_cast<size_t>(hf) * wf, -1);
  std::vector<double> zmin(static_cast<size_t>(hf) * wf,
                           std::numeric_limits<double>::infinity());

  for (const LidarPoint& pt : points.points) {
    auto pd = project({pt.x, pt.y, pt.z}, cam);
    if (!pd) continue;
    int px = static_cast<int>(pd->u) / stride;
    int py = static_cast<int>(pd->v) / stride;
    if (px < 0 || px >= wf || py < 0 || py >= hf) continue;
    size_t idx = static_cast<size_t>(py) * wf + px;
    zmin[idx] = std::min(zmin[idx], pd->depth);
  }
  for (size_t i = 0; i < zmin.size(); ++i) {
    if (!std::isfinite(zmin[i])) continue;
    if (auto b = bins.bin_of(zmin[i])) t.bin[i] = *b;
  }
  return t;
}

double depth_loss(const DepthDistribution& dist, const DepthTarget& target) {
  if (dist.hf != target.hf || dist.wf != target.wf)
    throw std::invalid_argument("depth_loss: shape mismatch");
  double sum = 0.0;
  size_t n = 0;
  for (int py = 0; py < dist.hf; ++py) {
    for (int px = 0; px < dist.wf; ++px) {
      int32_t b = target.at(px, py);
      if (b < 0) continue;
      double p = std::max(static_cast<double>(dist.at(px, py, b)), tol::kProbFloor);
      sum += -std::log(p);
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

}  // namespace sparsebev
