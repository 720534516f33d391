#pragma once

namespace sparsebev::tol {

// Central tolerance constants. Geometry runs in 64-bit, feature payloads in
// 32-bit, and these bounds are shared by library checks and the test suites.
inline constexpr double kOrthonormal = 1e-6;    // rotation validity
inline constexpr double kGeometry = 1e-9;       // transform round trips
inline constexpr double kProjection = 1e-6;     // project/unproject round trips
inline constexpr double kLiftMatch = 1e-5;      // sparse vs dense lift
inline constexpr double kConvMatch = 1e-4;      // sparse vs dense convolution
inline constexpr double kEncodeMatch = 1e-3;    // multi-layer encoder pipelines
inline constexpr double kScalarMatch = 1e-9;    // scalar re-computation oracles
inline constexpr double kProbFloor = 1e-12;     // log-loss probability floor
inline constexpr double kDepthProbSum = 1e-5;   // per-pixel depth mass check
inline constexpr double kGridAlign = 1e-9;      // grid/voxel alignment checks

}  // namespace sparsebev::tol
