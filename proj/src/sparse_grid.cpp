#include "sparsebev/sparse_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sparsebev {

namespace {

bool all_zero(const std::vector<float>& v) {
  for (float x : v)
    if (x != 0.0f) return false;
  return true;
}

}  // namespace

SparseGrid2D::SparseGrid2D(const GridSpec2D& spec, int channels)
    : spec_(spec), channels_(channels) {
  if (!spec.is_valid()) throw std::invalid_argument("SparseGrid2D: invalid grid spec");
  if (channels < 1) throw std::invalid_argument("SparseGrid2D: channels must be >= 1");
}

void SparseGrid2D::accumulate(const Cell2D& cell, std::span<const float> feat) {
  if (!in_range(cell)) throw std::out_of_range("SparseGrid2D::accumulate: cell out of range");
  if (feat.size() != static_cast<size_t>(channels_))
    throw std::invalid_argument("SparseGrid2D::accumulate: feature length mismatch");
  auto [it, inserted] = cells_.try_emplace(key_of(cell), channels_, 0.0f);
  std::vector<float>& v = it->second;
  for (int c = 0; c < channels_; ++c) v[c] += feat[c];
}

void SparseGrid2D::set(const Cell2D& cell, std::span<const float> feat) {
  if (!in_range(cell)) throw std::out_of_range("SparseGrid2D::set: cell out of range");
  if (feat.size() != static_cast<size_t>(channels_))
    throw std::invalid_argument("SparseGrid2D::set: feature length mismatch");
  cells_[key_of(cell)].assign(feat.begin(), feat.end());
}

const std::vector<float>* SparseGrid2D::find(const Cell2D& cell) const {
  return find_key(key_of(cell));
}

const std::vector<float>* SparseGrid2D::find_key(int64_t key) const {
  auto it = cells_.find(key);
  return it == cells_.end() ? nullptr : &it->second;
}

int64_t SparseGrid2D::active_count() const {
  int64_t n = 0;
  for (const auto& [k, v] : cells_)
    if (!all_zero(v)) ++n;
  return n;
}

double SparseGrid2D::sparsity() const {
  double total = static_cast<double>(spec_.cell_count());
  return (total - static_cast<double>(active_count())) / total;
}

void SparseGrid2D::compact() {
  for (auto it = cells_.begin(); it != cells_.end();) {
    if (all_zero(it->second))
      it = cells_.erase(it);
    else
      ++it;
  }
}

std::vector<int64_t> SparseGrid2D::sorted_keys() const {
  std::vector<int64_t> keys;
  keys.reserve(cells_.size());
  for (const auto& [k, v] : cells_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::vector<int64_t> SparseGrid2D::sorted_active_keys() const {
  std::vector<int64_t> keys;
  keys.reserve(cells_.size());
  for (const auto& [k, v] : cells_)
    if (!all_zero(v)) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  return keys;
}

SparseGrid3D::SparseGrid3D(const VoxelSpec3D& spec, int channels)
    : spec_(spec), channels_(channels) {
  if (!spec.is_valid()) throw std::invalid_argument("SparseGrid3D: invalid voxel spec");
  if (channels < 1) throw std::invalid_argument("SparseGrid3D: channels must be >= 1");
}

void SparseGrid3D::accumulate(const Cell3D& cell, std::span<const float> feat) {
  if (cell.ix < 0 || cell.ix >= spec_.nx || cell.iy < 0 || cell.iy >= spec_.ny ||
      cell.iz < 0 || cell.iz >= spec_.nz)
    throw std::out_of_range("SparseGrid3D::accumulate: cell out of range");
  if (feat.size() != static_cast<size_t>(channels_))
    throw std::invalid_argument("SparseGrid3D::accumulate: feature length mismatch");
  auto [it, inserted] = cells_.try_emplace(key_of(cell), channels_, 0.0f);
  for (int c = 0; c < channels_; ++c) it->second[c] += feat[c];
}

void SparseGrid3D::set(const Cell3D& cell, std::span<const float> feat) {
  if (cell.ix < 0 || cell.ix >= spec_.nx || cell.iy < 0 || cell.iy >= spec_.ny ||
      cell.iz < 0 || cell.iz >= spec_.nz)
    throw std::out_of_range("SparseGrid3D::set: cell out of range");
  if (feat.size() != static_cast<size_t>(channels_))
    throw std::invalid_argument("SparseGrid3D::set: feature length mismatch");
  cells_[key_of(cell)].assign(feat.begin(), feat.end());
}

const std::vector<float>* SparseGrid3D::find(const Cell3D& cell) const {
  auto it = cells_.find(key_of(cell));
  return it == cells_.end() ? nullptr : &it->second;
}

int64_t SparseGrid3D::active_count() const {
  int64_t n = 0;
  for (const auto& [k, v] : cells_)
    if (!all_zero(v)) ++n;
  return n;
}

double SparseGrid3D::sparsity() const {
  double total = static_cast<double>(spec_.cell_count());
  return (total - static_cast<double>(active_count())) / total;
}

void SparseGrid3D::compact() {
  for (auto it = cells_.begin(); it != cells_.end();) {
    if (all_zero(it->second))
      it = cells_.erase(it);
    else
      ++it;
  }
}

std::vector<int64_t> SparseGrid3D::sorted_keys() const {
  std::vector<int64_t> keys;
  keys.reserve(cells_.size());
  for (const auto& [k, v] : cells_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  return keys;
}

SparseGrid2D concat_fuse(const SparseGrid2D& a, const SparseGrid2D& b) {
  if (!(a.spec() == b.spec()))
    throw std::invalid_argument("concat_fuse: grid specs differ");
  int ca = a.channels();
  int cb = b.channels();
  SparseGrid2D out(a.spec(), ca + cb);

  std::vector<int64_t> keys = a.sorted_active_keys();
  std::vector<int64_t> kb = b.sorted_active_keys();
  keys.insert(keys.end(), kb.begin(), kb.end());
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  std::vector<float> feat(static_cast<size_t>(ca + cb));
  for (int64_t key : keys) {
    std::fill(feat.begin(), feat.end(), 0.0f);
    if (const std::vector<float>* fa = a.find_key(key))
      std::copy(fa->begin(), fa->end(), feat.begin());
    if (const std::vector<float>* fb = b.find_key(key))
      std::copy(fb->begin(), fb->end(), feat.begin() + ca);
    out.set(out.cell_of(key), feat);
  }
  return out;
}

DenseGrid2D to_dense(const SparseGrid2D& grid) {
  DenseGrid2D d(grid.spec(), grid.channels());
  for (int64_t key : grid.sorted_keys()) {
    Cell2D c = grid.cell_of(key);
    const std::vector<float>& v = *grid.find_key(key);
    for (int ch = 0; ch < grid.channels(); ++ch) d.at(c.ix, c.iy, ch) = v[ch];
  }
  return d;
}

SparseGrid2D from_dense(const DenseGrid2D& dense) {
  SparseGrid2D g(dense.spec, dense.channels);
  std::vector<float> feat(static_cast<size_t>(dense.channels));
  for (int iy = 0; iy < dense.spec.ny; ++iy) {
    for (int ix = 0; ix < dense.spec.nx; ++ix) {
      bool nonzero = false;
      for (int c = 0; c < dense.channels; ++c) {
        feat[c] = dense.at(ix, iy, c);
        nonzero |= feat[c] != 0.0f;
      }
      if (nonzero) g.set({ix, iy}, feat);
    }
  }
  return g;
}

bool semantic_equal(const SparseGrid2D& a, const SparseGrid2D& b) {
  if (!(a.spec() == b.spec()) || a.channels() != b.channels()) return false;
  auto ka = a.sorted_active_keys();
  auto kb = b.sorted_active_keys();
  if (ka != kb) return false;
  for (int64_t key : ka) {
    if (*a.find_key(key) != *b.find_key(key)) return false;
  }
  return true;
}

double max_abs_diff(const SparseGrid2D& a, const SparseGrid2D& b) {
  if (!(a.spec() == b.spec()) || a.channels() != b.channels())
    return std::numeric_limits<double>::infinity();
  auto keys = a.sorted_keys();
  auto kb = b.sorted_keys();
  keys.insert(keys.end(), kb.begin(), kb.end());
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  double worst = 0.0;
  for (int64_t key : keys) {
    const std::vector<float>* fa = a.find_key(key);
    const std::vector<float>* fb = b.find_key(key);
    for (int c = 0; c < a.channels(); ++c) {
      double va = fa ? (*fa)[c] : 0.0;
      double vb = fb ? (*fb)[c] : 0.0;
      worst = std::max(worst, std::abs(va - vb));
    }
  }
  return worst;
}

int64_t estimated_sparse_bytes(int64_t active_count, int channels) {
  return active_count * (static_cast<int64_t>(channels) * 4 + kCellKeyOverheadBytes);
}

int64_t estimated_sparse_bytes(const SparseGrid2D& grid) {
  return estimated_sparse_bytes(grid.active_count(), grid.channels());
}

int64_t estimated_dense_bytes(const GridSpec2D& spec, int channels) {
  return spec.cell_count() * channels * 4;
}

}  // namespace sparsebev
