#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsebev/detection.hpp"
#include "sparsebev/geometry.hpp"
#include "sparsebev/lidar.hpp"
#include "sparsebev/temporal.hpp"
#include "sparsebev/view_transformer.hpp"

namespace sparsebev {

struct SizeRange {
  double lo = 1.0;
  double hi = 2.0;
};

struct LidarConfig {
  int rays_per_frame = 20000;
  double max_range = 200.0;
  double dropout_exponent = 2.0;   // expected returns per object ~ area / r^exponent
  double range_noise_sigma = 0.02; // meters, along the ray
  double sensor_height = 2.0;      // meters above the ego origin
  double ground_fraction = 0.3;    // share of the ray budget spent on ground returns
  double ground_min_range = 2.0;
};

// Deterministic synthetic world. Objects are static boxes resting on the
// ground plane (z = 0); the ego drives a straight line at constant speed.
// Everything downstream is a pure function of (config, seed).
struct SceneConfig {
  double range_m = 200.0;  // half extent of the object spawn area
  int n_objects = 20;
  int n_classes = 3;
  std::vector<SizeRange> class_sizes;  // per class; box l, w, h drawn independently
  double min_separation = 6.0;         // BEV center distance floor between objects
  double min_spawn_radius = 5.0;       // keep boxes off the ego origin
  LidarConfig lidar;
  std::vector<CameraModel> cameras;
  int n_frames = 1;
  double ego_speed = 5.0;  // m/s along +x
  double frame_dt = 0.1;   // seconds between frames
  uint64_t seed = 1;

  // Config with the default 6-camera rig and per-class size ranges filled in.
  static SceneConfig defaults();
};

// n cameras at equal yaw increments, shared pinhole intrinsics, mounted at
// mount_height above the ego origin.
std::vector<CameraModel> default_camera_rig(int n_cams, int width, int height,
                                            double hfov_deg, double mount_height);

struct Scene {
  SceneConfig cfg;
  std::vector<std::vector<Box3D>> objects;  // per frame, world frame
  std::vector<FramePose> poses;             // per frame
};

// Seeded placement with overlap rejection (bounded retries). Throws when a
// non-overlapping placement cannot be found.
Scene generate_scene(const SceneConfig& cfg);

// Ground-truth boxes of one frame expressed in that frame's ego coordinates.
std::vector<Box3D> gt_in_ego(const Scene& scene, int frame);

// Surface-sampled LiDAR frame in ego coordinates. Expected returns per object
// scale with projected area / r^dropout_exponent; ground returns fill the
// remaining budget with log-uniform radial density. Gaussian range noise is
// applied along each ray.
PointCloud render_lidar(const Scene& scene, int frame);

struct CameraGroundTruth {
  std::vector<Box2D> boxes;  // axis-aligned hulls of projected corners, image-clipped
  std::vector<int> classes;
  std::vector<int> track_ids;
};

// 2D ground truth for one camera: corner-projection hulls of every object not
// fully behind the camera, clipped to the image; empty clips are omitted.
CameraGroundTruth render_camera_gt(const Scene& scene, int frame,
                                   const CameraModel& cam);

// First hit (boxes or ground plane) along the pixel ray, as camera-frame
// depth. Empty when nothing is hit within max_range.
std::optional<double> analytic_depth(const Scene& scene, int frame,
                                     const CameraModel& cam, double u, double v,
                                     double max_range);

// Backbone surrogate configuration. Channel layout of the emitted context
// vectors: [0, n_classes) one-hot class embedding scaled by
// class_embed_strength, channel n_classes = objectness, remaining channels
// noise. Background pixels carry noise only.
struct OracleFeatureConfig {
  int hf = 32;
  int wf = 64;
  int stride = 8;
  int channels = 8;  // must be >= n_classes + 1
  double class_embed_strength = 1.0;
  double depth_sharpness = 50.0;  // logit slope away from the true bin
  double noise_amp = 0.0;
  uint64_t seed = 7;
};

struct OracleImage {
  ImageFeatures img;
  std::vector<float> depth_logits;  // layout as DepthDistribution::probs
};

// Deterministic surrogate for the learned image backbone: class-indicator
// context on foreground pixels and depth logits peaked at the analytic
// surface depth bin.
OracleImage oracle_image_features(const Scene& scene, int frame, int cam_index,
                                  const OracleFeatureConfig& ocfg,
                                  const DepthBins& bins);

// Head weights that read the class-indicator channels of the fused feature
// directly (camera block assumed at channel offset 0): object cells score
// above 0.5 for the true class, background cells below, in the noise-free
// setting. Regression outputs are zero.
HeadWeights oracle_head_weights(const OracleFeatureConfig& ocfg, int n_classes,
                                int fused_channels);

// Scene serialization: JSON document plus a `.lock` sidecar holding the FNV
// hash of the JSON bytes for reproducibility assertions.
std::string scene_to_json(const Scene& scene);
uint64_t scene_hash(const Scene& scene);
void save_scene(const std::string& json_path, const Scene& scene);
Scene load_scene(const std::string& json_path);

}  // namespace sparsebev
