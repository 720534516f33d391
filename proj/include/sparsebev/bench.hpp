#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparsebev/scene_sim.hpp"
#include "sparsebev/sparse_conv.hpp"

namespace sparsebev {

// End-to-end pipeline settings: view transformer, LiDAR branch, fusion,
// encoder, head, temporal merge. dense_mode swaps the sparse containers for
// the dense reference path (same masks, same math) for paired comparisons.
struct PipelineConfig {
  double range_m = 60.0;  // BEV half extent
  double bev_cell = 0.6;
  double voxel_xy = 0.075;
  double voxel_z = 0.2;
  double z_min = -0.2;
  double z_max = 3.8;
  DepthBins bins{1.0, 121.0, 200};
  int topk = 10;
  bool image_aware = true;  // mask the lift with 2D boxes
  bool depth_aware = true;  // keep only top-k depth bins
  int noise_windows = 0;
  int noise_window_min = 2;
  int noise_window_max = 6;
  OracleFeatureConfig oracle;
  VoxelFeatureConfig voxel_feat;
  bool use_encoder = false;  // default stack when true, passthrough otherwise
  int encoder_mid = 32;
  int encoder_out = 32;
  uint64_t encoder_seed = 11;
  bool oracle_head = true;  // seeded random head otherwise (timing runs)
  uint64_t head_seed = 13;
  int peak_radius = 5;
  double score_threshold = 0.5;
  int max_detections = 256;
  double match_radius = 2.0;
  int history_frames = 0;
  uint64_t merge_seed = 17;
  int threads = 1;
  bool dense_mode = false;

  GridSpec2D bev_spec() const;
  VoxelSpec3D voxel_spec() const;
};

struct StageTimes {
  double view_ms = 0.0;
  double encode_ms = 0.0;
  double head_ms = 0.0;
  double temporal_ms = 0.0;

  double total() const { return view_ms + encode_ms + head_ms + temporal_ms; }
};

// One measured configuration: sparsity accounting, storage model, stage
// medians/mins over the repetitions, and detection quality against the
// simulator ground truth.
struct BenchRow {
  // configuration echo
  double range_m = 0.0;
  double bev_cell = 0.0;
  int hf = 0;
  int wf = 0;
  int stride = 0;
  int n_cams = 0;
  int depth_bins = 0;
  int topk = 0;
  bool image_aware = false;
  bool depth_aware = false;
  int history_frames = 0;
  int n_objects = 0;
  uint64_t seed = 0;
  std::string mode;  // "sparse" | "dense"
  // measurements
  double s_cam = 0.0;
  double s_fuse = 0.0;
  int64_t active_cam = 0;
  int64_t active_lidar = 0;
  int64_t active_fused = 0;
  double frustum_occupancy = 0.0;
  int64_t bytes_dense = 0;
  int64_t bytes_sparse = 0;
  StageTimes median;
  StageTimes minimum;
  double precision = 0.0;
  double recall = 0.0;
  double ap = 0.0;
};

struct PipelineResult {
  std::vector<Detection> detections;  // final frame
  EvalResult eval;
  BenchRow row;
};

// Simulator -> sparse lift (per camera) -> voxelize/flatten -> concat fusion
// -> encoder -> head, plus temporal merge when history_frames > 0. Stage
// wall times exclude the simulator and serialization.
PipelineResult run_pipeline(const SceneConfig& scene_cfg, const PipelineConfig& pipe,
                            int repetitions = 3, int warmup = 1);

// Occupancy-controlled encoder timing row (synthetic grids, no scene).
struct EncoderRow {
  double sparsity = 0.0;
  int64_t active = 0;
  double sparse_ms_median = 0.0;
  double sparse_ms_min = 0.0;
  double dense_ms_median = 0.0;
  double dense_ms_min = 0.0;
};

struct FeatureShape {
  int hf = 0;
  int wf = 0;
};

// Sweep axes over the pipeline plus the synthetic encoder-sparsity axis.
// Empty axes collapse to the base config's value.
struct BenchConfig {
  SceneConfig scene;
  PipelineConfig pipeline;
  std::vector<double> ranges;
  std::vector<FeatureShape> resolutions;
  std::vector<int> k_values;
  std::vector<int> bin_counts;
  std::vector<int> history_frames;
  std::vector<double> encoder_sparsities;
  double object_density = 0.0;  // objects per m^2; > 0 scales count with area
  int repetitions = 5;
  int warmup = 1;
  uint64_t seed = 1;
  int enc_grid_n = 192;
  int enc_channels = 16;
  uint64_t enc_seed = 23;

  static BenchConfig defaults();
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<EncoderRow> encoder_rows;
  std::string env_note;
};

// Cartesian product of the configured axes; repetitions with warmup
// discarded, medians reported.
BenchReport sweep(const BenchConfig& cfg);

// Random grid with the prescribed fraction of active cells.
SparseGrid2D synth_occupancy_grid(const GridSpec2D& spec, int channels,
                                  double occupancy, uint64_t seed);

struct CrossoverResult {
  double sparsity = 0.0;  // interpolated point where sparse and dense times meet
  bool found = false;     // false: no sign change in range, sparsity is the boundary
  std::string note;
};

// Interpolated sparsity at which the sparse encoder's wall time equals the
// dense encoder's, from the report's encoder rows.
CrossoverResult crossover_analysis(const BenchReport& report);

// sweep.csv (pipeline rows) + encoder_sweep.csv + sweep.json. Column order
// is fixed and documented in the README.
void write_report_csv(const std::string& out_dir, const BenchReport& report);
void write_report_json(const std::string& path, const BenchReport& report);
BenchReport load_report_json(const std::string& path);

// JSON config file covering {"scene": .., "pipeline": .., "bench": ..};
// missing keys keep defaults.
BenchConfig load_bench_config(const std::string& path);
std::string bench_config_json(const BenchConfig& cfg);
std::string pipeline_config_hash(const SceneConfig& scene, const PipelineConfig& pipe);

// Deterministic oracle-equivalence suite: writes verify_report.json and
// verify_detections.jsonl under out_dir, returns true when every check
// passes. Output bytes depend only on the seed.
bool run_verify(const std::string& out_dir, uint64_t seed, int threads);

}  // namespace sparsebev
