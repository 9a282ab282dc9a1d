#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "boundarykit/geometry.hpp"
#include "boundarykit/point_cloud.hpp"

// Synthetic ground-truth manifolds: uniform samplers, exact (or certified
// numeric) distance oracles, exact tangent frames and outward normals, and
// reach constants.  These are the test fixtures for the whole pipeline.

namespace boundarykit {

// Smooth compactly supported push along a fixed direction:
//   Phi(x) = x + eta * phi((x - x0) / delta) * e1,
//   phi(y) = exp(-|y|^2 / (1 - |y|^2)) inside the unit ball, 0 outside.
// phi(0) = 1, |grad phi| <= 5/2 and |Hess phi|_2 <= 23 everywhere; Phi is the
// identity (bit-exact) outside B(x0, delta).
class BumpMap {
  public:
    BumpMap(Eigen::VectorXd x0, double delta, double eta, Eigen::VectorXd push_dir);

    static double phi(const Eigen::VectorXd& y);
    static Eigen::VectorXd grad_phi(const Eigen::VectorXd& y);

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;  // analytic dPhi

    // finite-difference operator norms, independent of the analytic formulas
    static double grad_phi_norm_fd(const Eigen::VectorXd& y, double step = 1e-5);
    static double hess_phi_norm_fd(const Eigen::VectorXd& y, double step = 1e-4);
    double dmap_minus_identity_norm_fd(const Eigen::VectorXd& x, double step = 1e-5) const;
    double d2map_norm_fd(const Eigen::VectorXd& x, double step = 1e-4) const;

    // regularity budget: slope 5 eta / (2 delta) <= 1/10 and curvature
    // 23 eta / delta^2 <= 1 / (2 base_reach) keep the image reach controlled
    struct Admissibility {
        double slope, slope_limit;
        double curvature, curvature_limit;
        bool ok() const { return slope <= slope_limit && curvature <= curvature_limit; }
    };
    Admissibility admissibility(double base_reach) const;

    double eta() const { return eta_; }
    double delta() const { return delta_; }
    const Eigen::VectorXd& center() const { return x0_; }
    const Eigen::VectorXd& push_dir() const { return e1_; }

  private:
    Eigen::VectorXd x0_, e1_;
    double delta_, eta_;
};

enum class ManifoldKind {
    segment,
    circle,
    sphere,
    spiral,
    annulus,
    half_sphere,
    moebius,
    bumped_sphere,
    bumped_ball,
};

std::string kind_name(ManifoldKind k);
ManifoldKind kind_from_name(const std::string& name);

struct ReachInfo {
    double manifold = 0.0;  // reach of M (may be +inf)
    double boundary = 0.0;  // reach of dM (+inf when there is no boundary)
};

class SyntheticManifold {
  public:
    ManifoldKind kind() const;
    int intrinsic_dim() const;
    int ambient_dim() const;
    bool has_boundary() const;
    ReachInfo reaches() const;
    std::string params_summary() const;  // for sidecar metadata

    // n independent draws from the uniform (volume) measure on M;
    // deterministic in (n, seed) and identical under any evaluation order
    // because every point forks its own generator substream
    PointCloud sample_uniform(int n, std::uint64_t seed) const;

    // Euclidean distance from an arbitrary ambient point to M (exact closed
    // form, or grid + local refinement certified to 1e-9 resolution)
    double distance_to(const Eigen::VectorXd& z) const;

    // Distance from a point of M (within 1e-6, else OutsideDomain) to dM;
    // +inf when M has no boundary.
    double distance_to_boundary(const Eigen::VectorXd& x) const;

    // Exact tangent frame at a point of M (within 1e-6, else OutsideDomain).
    Frame exact_tangent(const Eigen::VectorXd& x) const;

    // Unit outward normal at the boundary point of dM nearest to x; lies in
    // the tangent frame and points out of M.  Requires a boundary.
    Eigen::VectorXd exact_outward_normal(const Eigen::VectorXd& x) const;

    // Deterministic near-uniform grid on dM with roughly `count` points
    // (exactly the endpoints for 1-dimensional manifolds).  Requires a
    // boundary.
    std::vector<Eigen::VectorXd> boundary_grid(int count) const;

    struct Impl;
    explicit SyntheticManifold(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  private:
    std::shared_ptr<const Impl> impl_;
};

SyntheticManifold make_segment(double length = 1.0, int ambient_dim = 1);
SyntheticManifold make_circle(double radius = 1.0);
SyntheticManifold make_sphere(double radius = 1.0);
SyntheticManifold make_spiral();      // (cos t, sin t, t/3), t in [0, 5 pi]
SyntheticManifold make_annulus();     // B(0,1) \ B(0,0.4) in the plane
SyntheticManifold make_half_sphere(); // unit sphere restricted to x1 >= 0
SyntheticManifold make_moebius();     // half-width 1, center radius 3
SyntheticManifold make_bumped_sphere(double eta = 0.0075, double delta = 0.6);
SyntheticManifold make_bumped_ball(double eta = 0.0075, double delta = 0.6);

SyntheticManifold make_manifold(ManifoldKind kind);  // defaults for each kind

}  // namespace boundarykit
