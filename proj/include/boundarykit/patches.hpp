#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "boundarykit/detector.hpp"
#include "boundarykit/geometry.hpp"
#include "boundarykit/synth.hpp"

// The reconstruction: a union of tangential d-balls at interior points and
// half-balls (ball cut by the estimated normal's halfspace) at boundary
// observations.  Kept implicit; every consumer works through distance
// queries, so Hausdorff evaluation never needs a mesh.

namespace boundarykit {

struct InnerPatch {
    Eigen::VectorXd center;
    Frame frame;  // d-dimensional
    double radius = 0.0;
};

struct BoundaryPatch {
    Eigen::VectorXd center;
    Frame frame;             // full d-dimensional tangent frame
    Eigen::VectorXd normal;  // mean witness normal, possibly shorter than unit
    double radius = 0.0;
};

struct PatchComplex {
    std::vector<InnerPatch> inner;
    std::vector<BoundaryPatch> boundary;
    double eps_int = 0.0, eps_bd = 0.0;
    std::vector<std::string> warnings;

    int size() const { return static_cast<int>(inner.size() + boundary.size()); }
};

// Boundary patches at every detected point whose normal survives the
// degeneracy filter; inner patches at every cloud point at distance at least
// eps_bd / 2 from the detected set (all points when nothing was detected).
// eps_int > eps_bd / 6 only warns: the recommended headroom is not a hard
// precondition.
PatchComplex build_patches(const PointCloud& cloud, const TangentField& tangents,
                           const BoundaryResult& boundary, double eps_int, double eps_bd,
                           const NumericPolicy& policy = NumericPolicy::standard());

// Exact distance from z to the d-ball patch: with (t, nu) the in-frame and
// normal split of z - center, sqrt(nu^2 + max(0, |t| - radius)^2).
double distance_to_inner_patch(const Eigen::VectorXd& z, const InnerPatch& patch);

// Exact distance to the half-ball.  Project the in-frame part onto the
// halfspace {<u, w> <= 0} (w the projected normal), then clamp the result to
// the radius.  The ball is centered at a point of the halfspace wall, so
// halfspace-then-clamp is the exact convex projection.
double distance_to_boundary_patch(const Eigen::VectorXd& z, const BoundaryPatch& patch,
                                  const NumericPolicy& policy = NumericPolicy::standard());

double distance_to_complex(const Eigen::VectorXd& z, const PatchComplex& complex,
                           const NumericPolicy& policy = NumericPolicy::standard());

// per_patch uniform draws from every patch (cube rejection in the frame,
// then lift); one generator substream per (patch, draw), so the output is a
// pure function of (complex, per_patch, seed)
std::vector<Eigen::VectorXd> sample_complex(const PatchComplex& complex, int per_patch,
                                            std::uint64_t seed);

struct HausdorffReport {
    double sup_M_to_Mhat = 0.0;      // over a truth sample, distance to the complex
    double sup_Mhat_to_M = 0.0;      // over a complex sample, distance to the truth
    double truth_resolution = 0.0;   // max nearest-neighbor gap of the truth sample
    int truth_count = 0;
    int estimator_sample_count = 0;

    double hausdorff() const { return std::max(sup_M_to_Mhat, sup_Mhat_to_M); }
};

// Two-sided sampled Hausdorff discrepancy between the complex and a
// synthetic ground truth; the truth side uses sample_uniform(m_truth, seed),
// the estimator side sample_complex(per_patch, seed + 1).
HausdorffReport hausdorff_to_truth(const PatchComplex& complex,
                                   const SyntheticManifold& manifold, int m_truth,
                                   int per_patch, std::uint64_t seed, int threads = 0);

}  // namespace boundarykit
