#pragma once

#include <Eigen/Dense>
#include <vector>

#include "boundarykit/geometry.hpp"
#include "boundarykit/numeric_policy.hpp"
#include "boundarykit/point_cloud.hpp"
#include "boundarykit/tangent.hpp"
#include "boundarykit/voronoi.hpp"

// Boundary observation detection: a point is flagged when some witness
// neighborhood sees its projected Voronoi cell extend at least rho away from
// it.  Also in this module: per-point outward normal estimates, boundary
// tangent frames, and farthest-point sparsification.

namespace boundarykit {

struct DetectionParams {
    double R0 = 0.0;   // localization scale
    double r = 0.0;    // witness neighborhood radius (0: only the point itself)
    double rho = 0.0;  // minimal projected cell width
    double h = 0.0;    // PCA bandwidth used to build the tangent field

    // 0 < R0, 0 <= r, 0 < rho <= 2 R0, 0 < h
    void validate() const;

    // analytic bracket the calibrated values are expected to land in
    double rho_minus() const { return R0 / 4.0; }
    double rho_plus() const { return R0 / 2.0; }
    double r_plus() const { return R0 / 12.0; }
    // lower witness radius sqrt(reach_min R0) (density_factor log n /
    // (n R0^d))^(1/(d+1)), with the unknown dimensional constant set to 1;
    // density_factor stands for f_max^5 / f_min^6
    double r_minus(double reach_min, int d, int n, double density_factor = 1.0) const;
};

struct WitnessNormal {
    int witness = -1;        // cloud index j of the witnessing neighborhood
    Eigen::VectorXd normal;  // unit direction in R^D, lifted from T_j
};

struct BoundaryResult {
    std::vector<int> detected;  // ascending cloud indices with any witness
    // parallel to detected; witnesses[t] ascending in witness index
    std::vector<std::vector<WitnessNormal>> witnesses;
    // parallel to detected: plain mean of the per-witness normals, kept
    // unnormalized so |normals[t]| <= 1 measures witness agreement
    std::vector<Eigen::VectorXd> normals;
    // parallel to detected: (d-1)-frame inside the point's tangent frame,
    // orthogonal to the projected mean normal; default-empty at degenerate
    // entries
    std::vector<Frame> boundary_frames;
    std::vector<int> degenerate;      // detected indices whose projected mean
                                      // normal fell below tolerance
    std::vector<double> probe_radii;  // self-probe cell radius, all n points

    // position in `detected`, -1 when absent
    int position_of(int cloud_index) const;
};

// Every point's own cell probe (the (i, i) pair of detect) at clip 4 R0.
// Calibration consumes the radii; detect can reuse the probes untouched.
std::vector<VoronoiProbe> self_probes(const PointCloud& cloud, const TangentField& tangents,
                                      double R0, int threads = 0,
                                      const NumericPolicy& policy =
                                          NumericPolicy::standard());

// Scan all ordered pairs (i, j) with |X_i - X_j| <= r: project the cloud
// around X_j into its tangent frame, probe the cell of X_i's projection with
// clip 4 R0, and record a witness when the cell radius reaches rho (closed
// comparison, 1e-12 slack).  The probe point is appended as an extra site
// when X_i lies outside B(X_j, R0), which matches treating the cell as that
// of the point itself within the local diagram.
// `cached_self` may hold the self_probes() output for the same cloud,
// tangents and R0: the (i, i) probes are then reused instead of recomputed.
BoundaryResult detect(const PointCloud& cloud, const TangentField& tangents,
                      const DetectionParams& params, int threads = 0,
                      const NumericPolicy& policy = NumericPolicy::standard(),
                      const std::vector<VoronoiProbe>* cached_self = nullptr);

// Complement of the projected normal within the frame, as a (d-1)-frame in
// ambient coordinates.  Throws DegenerateNormal when the projection is below
// policy.degenerate_normal_tol.
Frame boundary_tangent(const Frame& frame, const Eigen::VectorXd& normal,
                       const NumericPolicy& policy = NumericPolicy::standard());

// Greedy farthest-point subsample starting at index 0, stopping once every
// point lies within eps of the selection.  Output in selection order; it is
// eps-separated and eps-covers the input.
std::vector<int> sparsify(const std::vector<Eigen::VectorXd>& points, double eps);

}  // namespace boundarykit
