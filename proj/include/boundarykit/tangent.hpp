#pragma once

#include <Eigen/Dense>
#include <vector>

#include "boundarykit/geometry.hpp"
#include "boundarykit/numeric_policy.hpp"
#include "boundarykit/point_cloud.hpp"

// Pointwise tangent space estimation from local second moments.

namespace boundarykit {

struct TangentEstimate {
    Frame frame;                  // D x d, orthonormal, eigenvectors of the
                                  // local covariance by descending eigenvalue
    Eigen::VectorXd eigenvalues;  // all D eigenvalues, descending
    int neighbor_count = 0;       // points of B(X_i, h) other than X_i
};

// Tangent frames for a whole cloud, one per point.
struct TangentField {
    std::vector<TangentEstimate> estimates;
    double bandwidth = 0.0;

    const Frame& frame(int i) const { return estimates[static_cast<std::size_t>(i)].frame; }
    int size() const { return static_cast<int>(estimates.size()); }
};

// Covariance of the offsets X_j - X_i over the neighbors inside B(X_i, h).
// The sum is normalized by n - 1 with n the full sample size, not by the
// neighbor count: the matrix is a truncated second moment, and downstream
// thresholds are calibrated against that scaling.
Eigen::MatrixXd local_covariance(const PointCloud& cloud, int i, double h);

// Top-d eigenspace of local_covariance, with a deterministic sign convention
// (first coordinate of each eigenvector above the dedup tolerance is made
// positive).  Throws InsufficientNeighbors when fewer than d other points lie
// in B(X_i, h); DegenerateSpectrum when the top-d eigenspace is numerically
// undefined (lambda_d within policy.spectral_gap_tol * lambda_1 of zero or of
// lambda_{d+1}).
TangentEstimate estimate_tangent(const PointCloud& cloud, int i, double h,
                                 const NumericPolicy& policy = NumericPolicy::standard());

// All points; parallel over i with outputs in per-index slots, so the result
// is identical for any thread count.  Per-point failures rethrow with the
// lowest failing index attached.
TangentField estimate_all_tangents(const PointCloud& cloud, double h, int threads = 0,
                                   const NumericPolicy& policy = NumericPolicy::standard());

}  // namespace boundarykit
