#pragma once

#include <Eigen/Dense>
#include <vector>

#include "boundarykit/errors.hpp"
#include "boundarykit/numeric_policy.hpp"
#include "boundarykit/point_cloud.hpp"

// Shared geometric primitives: orthonormal frames, tangential/normal
// splitting, subspace angles, Hausdorff distance and metric neighborhoods.

namespace boundarykit {

// Orthonormal basis of a k-dimensional subspace of R^D, columns are the basis
// vectors.  k = 0 is allowed and denotes the trivial subspace; it shows up as
// the boundary frame of a 1-dimensional manifold.
class Frame {
  public:
    Frame() = default;

    // `basis` must already have orthonormal columns (Gram residual within
    // policy.orthonormal_tol); use orthonormalize() to build one from raw
    // spanning vectors.
    explicit Frame(Eigen::MatrixXd basis,
                   const NumericPolicy& policy = NumericPolicy::standard());

    int ambient_dim() const { return static_cast<int>(basis_.rows()); }
    int dim() const { return static_cast<int>(basis_.cols()); }
    const Eigen::MatrixXd& basis() const { return basis_; }

    // coefficients of the orthogonal projection of v
    Eigen::VectorXd project_coeffs(const Eigen::VectorXd& v) const {
        return basis_.transpose() * v;
    }
    // embed in-frame coefficients back into R^D
    Eigen::VectorXd lift(const Eigen::VectorXd& coeffs) const {
        return basis_ * coeffs;
    }
    // D x D projector matrix onto the subspace
    Eigen::MatrixXd projector() const { return basis_ * basis_.transpose(); }

  private:
    Eigen::MatrixXd basis_{0, 0};
};

// Split of a vector against a frame: in-frame coefficients of the tangential
// part plus the norm of the orthogonal remainder.
struct Decomposition {
    Eigen::VectorXd tangential;  // length = frame.dim()
    double normal_norm = 0.0;
};

// Orthonormal basis spanning the same subspace as `vectors` (at least one
// vector, all same dimension).  Throws RankDeficient when the smallest
// singular value falls below policy.rank_tol times the largest.
Frame orthonormalize(const std::vector<Eigen::VectorXd>& vectors,
                     const NumericPolicy& policy = NumericPolicy::standard());

Decomposition decompose(const Frame& frame, const Eigen::VectorXd& v);

// Orthonormal basis (D x (D-1)) of the complement of a unit vector, from the
// Householder reflection that sends u to -sign(u_0) e_0; deterministic in u.
Eigen::MatrixXd complement_basis(const Eigen::VectorXd& unit);

// Largest principal angle between two subspaces, measured as the operator
// norm of the difference of their orthogonal projectors.  Equals the sine of
// the largest canonical angle when the subspaces have equal dimension.
double principal_angle(const Frame& f1, const Frame& f2);

// Hausdorff distance between two finite point sets (same ambient dimension,
// both nonempty).
double hausdorff(const std::vector<Eigen::VectorXd>& a,
                 const std::vector<Eigen::VectorXd>& b);

// max over `a` of the distance to `b`; hausdorff() is the max of both sweeps
double directed_hausdorff(const std::vector<Eigen::VectorXd>& a,
                          const std::vector<Eigen::VectorXd>& b);

// Indices j with |X_j - X_i| <= radius, ascending, always containing i.
std::vector<int> neighbors_within(const PointCloud& cloud, int i, double radius);

}  // namespace boundarykit
