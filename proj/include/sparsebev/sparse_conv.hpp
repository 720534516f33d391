#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparsebev/sparse_grid.hpp"

namespace sparsebev {

// Dense 2D convolution kernel, weights in (c_out, c_in, ky, kx) order.
// Convolution is correlation-style: output(x,y) reads input(x + kx - k/2,
// y + ky - k/2); no kernel flip.
struct ConvKernel2D {
  int c_in = 0;
  int c_out = 0;
  int k = 3;  // odd spatial size
  std::vector<float> weights;  // c_out * c_in * k * k
  std::vector<float> bias;     // c_out

  float w(int co, int ci, int ky, int kx) const {
    return weights[((static_cast<size_t>(co) * c_in + ci) * k + ky) * k + kx];
  }
  float& w(int co, int ci, int ky, int kx) {
    return weights[((static_cast<size_t>(co) * c_in + ci) * k + ky) * k + kx];
  }
  bool shape_ok() const;

  // Center-tap identity (square channel map, zero bias).
  static ConvKernel2D identity(int channels, int k = 3);
  // Seeded uniform init in [-1/sqrt(c_in*k^2), +1/sqrt(c_in*k^2)], zero bias.
  static ConvKernel2D seeded(int c_in, int c_out, int k, uint64_t seed);
};

enum class ConvMode { submanifold, regular };
enum class Activation { none, relu };

struct EncoderLayer {
  ConvKernel2D kernel;
  ConvMode mode = ConvMode::submanifold;
  int stride = 1;  // 1 or 2; submanifold layers must use stride 1
  Activation activation = Activation::relu;
};

struct EncoderConfig {
  std::vector<EncoderLayer> layers;

  // Channel chain consistency starting from c_in; throws on mismatch.
  void validate(int c_in) const;

  // Default stack: two submanifold 3x3 layers plus one regular stride-1 3x3,
  // seeded weights, zero bias.
  static EncoderConfig default_stack(int c_in, int c_mid, int c_out, uint64_t seed);
};

// Submanifold convolution: outputs exist exactly at the input's materialized
// cells; absent neighbors read as zero. Bias lands on those cells only.
SparseGrid2D submanifold_conv(const SparseGrid2D& g, const ConvKernel2D& ker,
                              int threads = 1);

// Regular sparse convolution: outputs exist at every strided cell whose
// receptive field touches an active input cell; values equal the dense
// convolution there. Bias lands on active output cells only (a dense conv
// with nonzero bias would light up every cell). Stride 2 halves the grid
// dimensions (ceil) and doubles the cell size.
SparseGrid2D sparse_conv(const SparseGrid2D& g, const ConvKernel2D& ker, int stride,
                         int threads = 1);

// Reference paths with per-output-cell map lookups, no rulebook. Used to
// cross-check the rulebook engine.
SparseGrid2D submanifold_conv_naive(const SparseGrid2D& g, const ConvKernel2D& ker);
SparseGrid2D sparse_conv_naive(const SparseGrid2D& g, const ConvKernel2D& ker,
                               int stride);

SparseGrid2D apply_activation(SparseGrid2D g, Activation act);

// Sequential layer application (submanifold / regular, stride, activation).
SparseGrid2D encode(const SparseGrid2D& g, const EncoderConfig& cfg, int threads = 1);

// Dense reference convolution: bias everywhere, same tap convention.
DenseGrid2D dense_conv(const DenseGrid2D& d, const ConvKernel2D& ker, int stride);
DenseGrid2D dense_encode(const DenseGrid2D& d, const EncoderConfig& cfg);

// JSON weight files: {"c_in":..,"c_out":..,"k":..,
//   "weights": nested [c_out][c_in][ky][kx], "bias": [c_out]}.
ConvKernel2D load_kernel_json(const std::string& path);
void save_kernel_json(const std::string& path, const ConvKernel2D& ker);

}  // namespace sparsebev
