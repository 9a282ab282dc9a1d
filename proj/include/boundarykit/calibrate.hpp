#pragma once

#include <string>
#include <utility>
#include <vector>

#include "boundarykit/point_cloud.hpp"
#include "boundarykit/tangent.hpp"

// Data-driven parameter selection: PCA bandwidth from k-NN coverage, the
// localization scale from tangential distortion of point pairs, and the cell
// width threshold from the jump in the sorted probe radii.

namespace boundarykit {

// Smallest radius covering k neighbors around every point, i.e. the max over
// i of the k-th nearest-neighbor distance (the point itself counts as the
// first).  k <= 0 selects the default ceil(d ln n) clamped to [d+1, n].
double bandwidth_h(const PointCloud& cloud, int k = 0);
int default_bandwidth_k(const PointCloud& cloud);

// Largest pairwise distance R such that every ordered pair (i, j) with
// |X_i - X_j| <= R keeps the tangential share of its offset within `delta`
// of 1:  | |pi_{T_i}(X_j - X_i)| / |X_j - X_i| - 1 | <= delta.
// Exact: pass one finds the smallest violating pair distance, pass two the
// largest distance strictly below it.  Throws NoAdmissibleScale when already
// the nearest pair violates.
double scale_R0(const PointCloud& cloud, const TangentField& tangents, double delta = 0.3);

// (pair distance, tangential ratio) subsample for plotting, at most
// max_samples entries taken at a fixed stride over the ordered pairs
std::vector<std::pair<double, double>> distortion_curve(const PointCloud& cloud,
                                                        const TangentField& tangents,
                                                        int max_samples = 4096);

enum class JumpRule {
    max_gap,             // widest consecutive gap, earliest on ties
    first_above_factor,  // first gap with rho_(k+1) >= 3 rho_(k) and
                         // rho_(k+1) >= 2 median; may find none
};

std::string jump_rule_name(JumpRule rule);
JumpRule jump_rule_from_name(const std::string& name);

struct JumpInfo {
    double rho = 0.0;
    int index = -1;       // gap between sorted_radii[index] and [index + 1]
    double gap = 0.0;
    bool found_jump = true;     // first_above_factor may fall back
    bool low_contrast = false;  // all radii equal (max_gap degenerate case)
};

// Mid-value of the selected jump in the ascending radii.  Non-finite radii
// are dropped; at least two finite values required (TooFewRadii).  Values at
// the clip stay in.  When first_above_factor finds no qualifying gap the
// result is max * 1.05 with found_jump = false, which places rho above every
// radius and empties the detection.
JumpInfo select_rho(const std::vector<double>& radii, double clip, JumpRule rule);

// the widest-gap contract: select_rho(radii, clip, max_gap).rho
double threshold_rho(const std::vector<double>& radii, double clip);

struct CalibrationReport {
    double h = 0.0;
    int k_used = 0;
    double R0 = 0.0;
    double distortion_delta = 0.0;
    double rho = 0.0;
    double r = 0.0;
    JumpInfo jump;
    JumpRule jump_rule = JumpRule::first_above_factor;
    bool rho_clamped = false;  // rho pulled down to the 2 R0 cap
    std::vector<double> sorted_radii;
    std::vector<std::pair<double, double>> distortion_samples;
};

}  // namespace boundarykit
