#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "boundarykit/calibrate.hpp"
#include "boundarykit/detector.hpp"
#include "boundarykit/patches.hpp"
#include "boundarykit/synth.hpp"

// End-to-end orchestration: auto-calibration in dependency order (bandwidth,
// tangents, localization scale, probe radii, cell width), detection, patch
// construction, and the rate-sweep experiment loop.

namespace boundarykit {

struct PipelineOptions {
    // calibration knobs; zero means "derive from the data"
    int k = 0;           // bandwidth neighbor count
    double delta = 0.3;  // tangential distortion tolerance for R0
    double h = 0.0;
    double R0 = 0.0;
    double rho = 0.0;
    double r = 0.0;  // witness radius; 0 is the working default, not "auto"
    double eps_int = 0.0;
    double eps_bd = 0.0;
    JumpRule jump_rule = JumpRule::first_above_factor;
    int threads = 0;

    // The distortion criterion alone cannot bound R0 on full-dimensional
    // clouds (the tangential ratio is identically 1), so the automatic value
    // is capped by the median distance to the cap_neighbors-th neighbor over
    // at most cap_sample probed points.
    int r0_cap_neighbors = 150;
    int r0_cap_sample = 512;
};

struct PipelineRun {
    CalibrationReport calibration;
    DetectionParams params;  // the values detection actually used
    double r_eff = 0.0;      // working witness scale: r when positive, else
                             // one sixth of the largest nearest-neighbor gap
    TangentField tangents;
    BoundaryResult boundary;
    double eps_int = 0.0, eps_bd = 0.0;
    PatchComplex patches;
    bool has_patches = false;
};

// the full-dimensional fallback bound described on PipelineOptions
double auto_R0_cap(const PointCloud& cloud, int cap_neighbors, int cap_sample);

// bandwidth, tangent field, R0, probe radii, rho (clamped into (0, 2 R0]),
// then detection; every stage honors an explicit override from `opt`
PipelineRun run_detection(const PointCloud& cloud, const PipelineOptions& opt);

// patch radii defaults (eps_bd = 18 r_eff, eps_int = largest 3rd-neighbor
// distance) and the patch complex; fills run.patches
void add_patches(PipelineRun& run, const PointCloud& cloud, const PipelineOptions& opt);

struct RateRow {
    int n = 0;
    std::uint64_t seed = 0;
    int detected_count = 0;
    double cover = 0.0;   // max over a boundary grid of distance to detected
    double excess = 0.0;  // max over detected of distance to the boundary
    double sup_M_to_Mhat = 0.0;
    double sup_Mhat_to_M = 0.0;
    double hausdorff = 0.0;
    double truth_resolution = 0.0;
};

struct RateSummary {
    std::vector<RateRow> rows;
    // log-log slopes over all rows; empty when under 3 distinct n or any
    // metric value is unusable (nonpositive or infinite)
    std::optional<double> slope_cover;
    std::optional<double> slope_excess;
    std::optional<double> slope_hausdorff;
};

// least-squares slope of log y against log x; nullopt when fewer than 3
// distinct x values or any entry is nonpositive or nonfinite
std::optional<double> loglog_slope(const std::vector<std::pair<double, double>>& xy);

RateSummary rate_sweep(const SyntheticManifold& manifold, const std::vector<int>& ns,
                       const std::vector<std::uint64_t>& seeds, const PipelineOptions& opt,
                       int boundary_grid_count = 720, int m_truth = 4000, int per_patch = 8);

}  // namespace boundarykit
