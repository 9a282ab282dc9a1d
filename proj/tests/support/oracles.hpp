#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "boundarykit/point_cloud.hpp"

// Reference implementations written straight from the definitions.  They
// share nothing with the library code they check beyond the basic containers,
// and they trade speed for obviousness; their values were frozen before the
// library side was written.

namespace oracles {

struct CellRadius {
    double radius = 0.0;
    Eigen::VectorXd direction;  // argmax ray direction (unit)
};

// Max distance from sites[p_index] over its Voronoi cell clipped to the axis
// box of half-width `clip`.  Two independent stages: uniform rejection
// samples inside the box keep the farthest cell member, then the star-shaped
// cutoff t(u) = sup{ t : p + t u inside the cell } is maximized over unit
// directions by grid search plus local refinement.  The cell is convex and
// contains p, so t(u) is a plain minimum of per-constraint cutoffs and the
// refinement only sharpens the sampled lower bound.
CellRadius voronoi_radius(const std::vector<Eigen::VectorXd>& sites, int p_index, double clip,
                          std::uint64_t seed, int samples);

// d = 1 closed form: the cell is the interval of bisector midpoints clipped
// to [p - clip, p + clip]; the radius is the longer arm.
double interval_radius(const std::vector<double>& sites, int p_index, double clip);

// Min distance from z to { center + basis u : |u| <= eps, <u, w> <= 0 } by
// scanning the in-frame grid with the given spacing (grid includes u = 0).
// Always an upper bound on the true distance, off by at most about one grid
// diagonal.
double halfdisk_grid_distance(const Eigen::VectorXd& z, const Eigen::VectorXd& center,
                              const Eigen::MatrixXd& basis, const Eigen::Vector2d& w,
                              double eps, double spacing);

// Min distance from z to `count` uniform draws of the in-frame ball of
// radius eps around center (cut by <u, w_inframe> <= 0 when w is non-null).
// Converges to the true patch distance from above.
double patch_distance_sampled(const Eigen::VectorXd& z, const Eigen::VectorXd& center,
                              const Eigen::MatrixXd& basis, double eps,
                              const Eigen::VectorXd* w, std::uint64_t seed, int count);

// plain double-loop Hausdorff distance
double hausdorff_loops(const std::vector<Eigen::VectorXd>& a,
                       const std::vector<Eigen::VectorXd>& b);

// distance from point i to its k-th nearest neighbor, the point itself
// counting as the first
double kth_neighbor_distance(const boundarykit::PointCloud& cloud, int i, int k);

// composite Simpson rule, n subintervals (rounded up to even)
double simpson(const std::function<double(double)>& f, double a, double b, int n);

// two-sided Kolmogorov-Smirnov statistic of the samples against a CDF
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

}  // namespace oracles
